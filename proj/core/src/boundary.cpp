#include "einlab/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "einlab/error.hpp"

namespace einlab {

JTensor to_surface(const JTensor& t, int coord) { return drop_variable(t, coord); }

namespace {

JTensor tangential_block(const JTensor& t, const std::vector<int>& tang) {
  const int k = static_cast<int>(tang.size());
  JTensor out(k, 2);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) out(a, b) = t(tang[static_cast<std::size_t>(a)], tang[static_cast<std::size_t>(b)]);
  return out;
}

// A_a^c h_cb, symmetrized over (a, b) as A_a^c h_cb + A_b^c h_ca.
JTensor a_circ_h(const JTensor& A, const JTensor& h, const JTensor& gi) {
  const int k = A.dim();
  JTensor am(k, 2);  // A_a^c
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) {
      Jet s(0.0);
      for (int d = 0; d < k; ++d) s += A(a, d) * gi(d, c);
      am(a, c) = s;
    }
  JTensor out(k, 2);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Jet s(0.0);
      for (int c = 0; c < k; ++c) s += am(a, c) * h(c, b) + am(b, c) * h(a, c);
      out(a, b) = s;
      out(b, a) = s;
    }
  return out;
}

}  // namespace

BoundaryFrame boundary_frame(const JTensor& g_jets, int coord, int orientation) {
  BoundaryFrame f;
  const int n = g_jets.dim();
  if (n < 2) throw UnsupportedDimensionError("hypersurface needs an ambient dimension of at least 2");
  f.n = n;
  f.coord = coord;
  f.orientation = orientation;
  for (int i = 0; i < n; ++i)
    if (i != coord) f.tang.push_back(i);
  f.geo = local_geometry(g_jets);
  if (f.geo.christoffel.empty()) throw CapabilityError("hypersurface data needs first derivatives of the metric");

  const Jet gbb = f.geo.ginv(coord, coord);
  if (!(gbb.value() > 0.0)) throw DegenerateMetricError("level coordinate has a null gradient");
  const Jet nrm = 1.0 / sqrt(gbb);
  f.nu_lower = JTensor(n, 1);
  f.nu_lower(coord) = static_cast<double>(orientation) * nrm;
  f.nu_upper = JTensor(n, 1);
  for (int i = 0; i < n; ++i) f.nu_upper(i) = f.geo.ginv(i, coord) * f.nu_lower(coord);

  // A_ab = <nabla_a nu, e_b> = -Gamma^k_ab nu_k, since nu_b = 0 for tangential b.
  const int k = n - 1;
  JTensor A(k, 2);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      A(a, b) = -(f.geo.christoffel(coord, f.tang[static_cast<std::size_t>(a)], f.tang[static_cast<std::size_t>(b)]) *
                  f.nu_lower(coord));
      A(b, a) = A(a, b);
    }
  const JTensor gt = to_surface(tangential_block(g_jets, f.tang), coord);
  try {
    f.sg = local_geometry(gt);
  } catch (const DegenerateMetricError&) {
    throw DegenerateMetricError("induced metric is degenerate");
  }
  f.A = to_surface(A, coord);
  f.H = trace(f.A, f.sg.ginv);
  f.area = sqrt(determinant_spd(f.sg.g));
  return f;
}

Hypersurface::Hypersurface(MetricField g, const Chart& chart, Face face) : g_(std::move(g)), face_(face) {
  chart.validate();
  n_ = chart.dim;
  if (face.coord < 0 || face.coord >= n_) throw DomainError("face coordinate outside the chart");
  const auto& [lo, hi] = chart.box[static_cast<std::size_t>(face.coord)];
  if (face.level < lo || face.level > hi) throw DomainError("face level outside the chart box");
  if (g_.dim() != n_) throw DomainError("metric and chart dimensions differ");
  std::vector<std::pair<double, double>> box;
  std::vector<CoordKind> kinds;
  for (int i = 0; i < n_; ++i) {
    if (i == face.coord) continue;
    box.push_back(chart.box[static_cast<std::size_t>(i)]);
    kinds.push_back(chart.kinds[static_cast<std::size_t>(i)]);
  }
  surface_chart_.dim = n_ - 1;
  surface_chart_.box = std::move(box);
  surface_chart_.kinds = std::move(kinds);
}

std::vector<double> Hypersurface::embed(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != n_ - 1) throw DomainError("surface point of wrong dimension");
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n_));
  for (int i = 0, a = 0; i < n_; ++i) x.push_back(i == face_.coord ? face_.level : u[static_cast<std::size_t>(a++)]);
  return x;
}

BoundaryFrame Hypersurface::frame(std::span<const double> u, int order) const {
  const auto x = embed(u);
  return boundary_frame(g_.metric_jets(x, order), face_.coord, face_.orientation);
}

namespace {
std::vector<Jet> packed(const JTensor& t) {
  const int k = t.dim();
  std::vector<Jet> out;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) out.push_back(t(i, j));
  return out;
}
}  // namespace

SymTensorField Hypersurface::induced_metric() const {
  const Hypersurface self = *this;
  const int k = n_ - 1;
  return SymTensorField(Field::pointwise(
      k, sym_size(k), [self](std::span<const double> u, int order) {
        // the frame needs first derivatives even when only values are asked for
        return packed(truncated(self.frame(u, std::max(order, 1)).gt(), order));
      },
      g_.max_order(), g_.field().mode()));
}

VectorField Hypersurface::normal() const {
  const Hypersurface self = *this;
  return VectorField(Field::pointwise(
      n_ - 1, n_,
      [self](std::span<const double> u, int order) {
        const auto f = self.frame(u, order + 1);
        return to_surface(truncated(f.nu_upper, order), self.face_.coord).data();
      },
      g_.max_order(), g_.field().mode()));
}

SymTensorField Hypersurface::second_fundamental() const {
  const Hypersurface self = *this;
  const int k = n_ - 1;
  return SymTensorField(Field::pointwise(
      k, sym_size(k), [self](std::span<const double> u, int order) { return packed(self.frame(u, order + 1).A); },
      g_.max_order() - 1, g_.field().mode()));
}

ScalarField Hypersurface::mean_curv() const {
  const Hypersurface self = *this;
  return ScalarField(Field::pointwise(
      n_ - 1, 1, [self](std::span<const double> u, int order) { return std::vector<Jet>{self.frame(u, order + 1).H}; },
      g_.max_order() - 1, g_.field().mode()));
}

ScalarField Hypersurface::area_element() const {
  const Hypersurface self = *this;
  return ScalarField(Field::pointwise(
      n_ - 1, 1,
      [self](std::span<const double> u, int order) {
        return std::vector<Jet>{self.frame(u, std::max(order, 1)).area.truncated(order)};
      },
      g_.max_order(), g_.field().mode()));
}

MetricField Hypersurface::surface_metric() const { return MetricField(induced_metric(), std::nullopt, "induced"); }

Hypersurface hypersurface_data(const MetricField& g, const Chart& chart, int face) {
  if (face < 0 || face >= static_cast<int>(chart.faces.size())) throw DomainError("chart has no such face");
  return Hypersurface(g, chart, chart.faces[static_cast<std::size_t>(face)]);
}

SurfaceValues surface_values(const Hypersurface& s, std::span<const double> u) {
  const auto f = s.frame(u, 2);
  SurfaceValues v;
  v.gt = values(f.gt());
  v.gt_inv = values(f.gt_inv());
  v.A = values(f.A);
  v.nu = values(f.nu_upper);
  v.H = f.H.value();
  v.area = f.area.value();
  v.R_sigma = f.sg.has_curvature() ? f.sg.scalar.value() : 0.0;
  return v;
}

// ---------------------------------------------------------------- conformal

namespace {
Jet relative_det_jets(const JTensor& gamma, const JTensor& background) {
  return determinant_spd(gamma) / determinant_spd(background);
}
}  // namespace

double relative_determinant(const SymTensorField& gamma, const SymTensorField& background, std::span<const double> u) {
  return relative_det_jets(gamma.jets(u, 0), background.jets(u, 0)).value();
}

SymTensorField conformal_normalize(const SymTensorField& gamma, const SymTensorField& background) {
  const int k = gamma.dim();
  if (background.dim() != k) throw DomainError("conformal_normalize: dimensions differ");
  auto normalize = [k](const JTensor& g, const JTensor& b) {
    if (!(min_eigenvalue(values(g)) > 0.0)) throw DegenerateMetricError("conformal representative is not positive");
    const Jet factor = pow(relative_det_jets(g, b), -1.0 / k);
    JTensor out(k, 2);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) out(i, j) = factor * g(i, j);
    return out;
  };
  if (gamma.field().composable() && background.field().composable()) {
    return SymTensorField::analytic(k, [gamma, background, normalize, k](std::span<const Jet> u, JTensor& out) {
      const JTensor r = normalize(gamma.apply(u), background.apply(u));
      for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) out(i, j) = r(i, j);
    });
  }
  return SymTensorField(Field::pointwise(
      k, sym_size(k),
      [gamma, background, normalize](std::span<const double> u, int order) {
        return packed(normalize(gamma.jets(u, order), background.jets(u, order)));
      },
      std::min(gamma.max_order(), background.max_order())));
}

AndersonData anderson_data(const Hypersurface& s, const SymTensorField& background) {
  return AndersonData{conformal_normalize(s.induced_metric(), background), s.mean_curv()};
}

// --------------------------------------------------------------- linearized

LinBoundaryJets lin_boundary_jets(const BoundaryFrame& f, const JTensor& h_jets) {
  const int n = f.n;
  const int k = n - 1;
  const int b = f.coord;
  LinBoundaryJets out;
  const JTensor& nu = f.nu_upper;

  JTensor omega(k, 1);
  for (int a = 0; a < k; ++a) {
    Jet s(0.0);
    for (int i = 0; i < n; ++i) s += nu(i) * h_jets(i, f.tang[static_cast<std::size_t>(a)]);
    omega(a) = s;
  }
  Jet hnn(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hnn += nu(i) * nu(j) * h_jets(i, j);

  const JTensor dh = covariant_derivative(h_jets, f.geo);  // (i, j, k) = h_{ij;k}
  JTensor dnu_h(k, 2);
  for (int a = 0; a < k; ++a)
    for (int c = a; c < k; ++c) {
      Jet s(0.0);
      const int ia = f.tang[static_cast<std::size_t>(a)];
      const int ic = f.tang[static_cast<std::size_t>(c)];
      for (int m = 0; m < n; ++m) s += nu(m) * dh(ia, ic, m);
      dnu_h(a, c) = s;
      dnu_h(c, a) = s;
    }

  out.ht = to_surface(tangential_block(h_jets, f.tang), b);
  out.omega = to_surface(omega, b);
  out.hnn = hnn.drop_variable(b);
  const JTensor dnh = to_surface(dnu_h, b);
  const JTensor& gi = f.gt_inv();
  out.tr_ht = trace(out.ht, gi);

  const JTensor dom = covariant_derivative(out.omega, f.sg);  // (a, c) = omega_{a|c}
  const JTensor ah = a_circ_h(f.A, out.ht, gi);
  out.A_prime = JTensor(k, 2);
  Jet div_omega(0.0);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) div_omega += gi(a, c) * dom(a, c);
  for (int a = 0; a < k; ++a)
    for (int c = a; c < k; ++c) {
      out.A_prime(a, c) = 0.5 * (dnh(a, c) + ah(a, c)) - 0.5 * (dom(a, c) + dom(c, a)) - 0.5 * out.hnn * f.A(a, c);
      out.A_prime(c, a) = out.A_prime(a, c);
    }
  out.H_prime = 0.5 * trace(dnh, gi) - div_omega - 0.5 * out.hnn * f.H;

  const JTensor nus = to_surface(nu, b);
  const JTensor om_up = raise(out.omega, gi);
  out.nu_prime = JTensor(n, 1);
  for (int i = 0; i < n; ++i) out.nu_prime(i) = -0.5 * out.hnn * nus(i);
  for (int a = 0; a < k; ++a) out.nu_prime(f.tang[static_cast<std::size_t>(a)]) -= om_up(a);
  return out;
}

LinBoundary lin_boundary(const Hypersurface& s, const SymTensorField& h, std::span<const double> u) {
  const auto f = s.frame(u, 2);
  const auto j = lin_boundary_jets(f, h.jets(s.embed(u), 1));
  LinBoundary out;
  out.nu_prime = values(j.nu_prime);
  out.A_prime = values(j.A_prime);
  out.ht = values(j.ht);
  out.omega = values(j.omega);
  out.H_prime = j.H_prime.value();
  out.hnn = j.hnn.value();
  out.tr_ht = j.tr_ht.value();
  return out;
}

LinBoundary lin_boundary(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> u,
                         int face) {
  return lin_boundary(hypersurface_data(ctx.background(), ctx.chart(), face), h, u);
}

SymTensorField lin_second_fundamental(const Hypersurface& s, const SymTensorField& h) {
  const int k = s.dim();
  return SymTensorField(Field::pointwise(
      k, sym_size(k),
      [s, h](std::span<const double> u, int order) {
        const auto f = s.frame(u, order + 2);
        return packed(lin_boundary_jets(f, h.jets(s.embed(u), order + 1)).A_prime);
      },
      std::min(s.metric().max_order() - 2, h.max_order() - 1)));
}

ScalarField lin_mean_curv(const Hypersurface& s, const SymTensorField& h) {
  return ScalarField(Field::pointwise(
      s.dim(), 1,
      [s, h](std::span<const double> u, int order) {
        const auto f = s.frame(u, order + 2);
        return std::vector<Jet>{lin_boundary_jets(f, h.jets(s.embed(u), order + 1)).H_prime};
      },
      std::min(s.metric().max_order() - 2, h.max_order() - 1)));
}

// ---------------------------------------------------------------- operators

Jet L_sigma_jets(const LocalGeometry& sg, int ambient_dim, const Jet& v) {
  if (ambient_dim < 3) throw UnsupportedDimensionError("L_Sigma needs n >= 3");
  if (!sg.has_curvature()) throw CapabilityError("L_Sigma needs second derivatives of the induced metric");
  JTensor vt(sg.n, 0);
  vt[0] = v;
  const JTensor hess = covariant_derivative(covariant_derivative(vt, sg), sg);
  const Jet lap = trace(hess, sg.ginv);
  return -lap - sg.scalar * v / static_cast<double>(ambient_dim - 2);
}

double L_sigma_apply(const Hypersurface& s, const ScalarField& v, std::span<const double> u) {
  if (s.ambient_dim() < 3) throw UnsupportedDimensionError("L_Sigma needs n >= 3");
  const auto f = s.frame(u, 2);
  return L_sigma_jets(f.sg, s.ambient_dim(), v.jet(u, 2)).value();
}

double L_sigma_apply(const MetricField& sigma_metric, int ambient_dim, const ScalarField& v,
                     std::span<const double> u) {
  if (ambient_dim < 3) throw UnsupportedDimensionError("L_Sigma needs n >= 3");
  const auto sg = local_geometry(sigma_metric, u, 2);
  return L_sigma_jets(sg, ambient_dim, v.jet(u, 2)).value();
}

ScalarField L_sigma(const Hypersurface& s, const ScalarField& v) {
  if (s.ambient_dim() < 3) throw UnsupportedDimensionError("L_Sigma needs n >= 3");
  return ScalarField(Field::pointwise(
      s.dim(), 1,
      [s, v](std::span<const double> u, int order) {
        const auto f = s.frame(u, order + 2);
        return std::vector<Jet>{L_sigma_jets(f.sg, s.ambient_dim(), v.jet(u, order + 2))};
      },
      std::min(s.metric().max_order() - 2, v.field().max_order() - 2)));
}

CauchyResidual conformal_cauchy_residual(const Hypersurface& s, const SymTensorField& h,
                                         std::span<const std::vector<double>> points) {
  CauchyResidual r;
  const int k = s.dim();
  for (const auto& u : points) {
    const auto lb = lin_boundary(s, h, u);
    const auto sv = surface_values(s, u);
    Tensor t1(k, 2);
    Tensor t2(k, 2);
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < k; ++c) {
        t1(a, c) = lb.ht(a, c) - lb.tr_ht / k * sv.gt(a, c);
        t2(a, c) = lb.A_prime(a, c) - lb.tr_ht / k * sv.A(a, c);
      }
    r.tangential = std::max(r.tangential, norm(t1, sv.gt_inv));
    r.second_fundamental = std::max(r.second_fundamental, norm(t2, sv.gt_inv));
  }
  return r;
}

double codazzi_residual(const Hypersurface& s, std::span<const double> u) {
  const auto f = s.frame(u, 2);
  const int k = s.dim();
  const JTensor dA = covariant_derivative(f.A, f.sg);  // (a, b, c) = A_{ab|c}
  Tensor r(k, 1);
  for (int b = 0; b < k; ++b) {
    double d = 0.0;
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < k; ++c) d += f.gt_inv()(a, c).value() * dA(a, b, c).value();
    r(b) = d - f.H.d(b);
  }
  return norm(r, values(f.gt_inv()));
}

double gauss_residual(const Hypersurface& s, double lambda, std::span<const double> u) {
  const auto f = s.frame(u, 2);
  const int n = s.ambient_dim();
  const double a2 = inner(f.A, f.A, f.gt_inv()).value();
  const double H = f.H.value();
  return f.sg.scalar.value() - (H * H - a2 + (n - 1) * (n - 2) * lambda);
}

DilationResiduals dilation_scaling_check(const LinearizedContext& ctx, const SymTensorField& h, double t,
                                         std::span<const std::vector<double>> boundary_points) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("dilation parameter must lie in (0, 1)");
  const double c = 1.0 - t;
  const MetricField& g = ctx.background();
  const MetricField gs(c * c * g, ctx.lambda() / (c * c), g.name() + "-dilated");
  DilationResiduals r;
  for (const auto& x : ctx.points()) {
    const JTensor hj = h.jets(x, 2);
    const Tensor r0 = values(lin_ricci_jets(local_geometry(g, x, 2), hj));
    const Tensor r1 = values(lin_ricci_jets(local_geometry(gs, x, 2), hj));
    for (std::size_t i = 0; i < r0.size(); ++i) r.ricci = std::max(r.ricci, std::abs(r1[i] - r0[i] / (c * c)));
  }
  if (ctx.chart().faces.empty()) return r;
  const Hypersurface s0 = hypersurface_data(g, ctx.chart(), 0);
  const Hypersurface s1(gs, ctx.chart(), ctx.chart().faces.front());
  const int k = s0.dim();
  for (const auto& u : boundary_points) {
    const auto b0 = lin_boundary(s0, h, u);
    const auto b1 = lin_boundary(s1, h, u);
    const auto v0 = surface_values(s0, u);
    const auto v1 = surface_values(s1, u);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const double t0 = b0.ht(a, b) - b0.tr_ht / k * v0.gt(a, b);
        const double t1 = b1.ht(a, b) - b1.tr_ht / k * v1.gt(a, b);
        r.traceless = std::max(r.traceless, std::abs(t1 - t0));
      }
    r.mean_curv = std::max(r.mean_curv, std::abs(b1.H_prime - b0.H_prime / (c * c * c)));
  }
  return r;
}

}  // namespace einlab
