#include "einlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "einlab/error.hpp"

namespace einlab {

namespace {

double inner2(const Tensor& a, const Tensor& b, const Tensor& gi) {
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += gi(i, k) * gi(j, l) * a(i, j) * b(k, l);
  return s;
}

double trace2(const Tensor& a, const Tensor& gi) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += gi(i, j) * a(i, j);
  return s;
}

double sqrt_det(const LocalGeometry& geo) { return std::sqrt(determinant_spd(truncated(geo.g, 0)).value()); }

// P(h) = -Ric'(h) + R'(h) g / 2 + (n-1) Lambda h at the base point.
Tensor p_value(const LocalGeometry& geo, double lambda, const JTensor& hj) {
  const int n = geo.n;
  const JTensor ric = lin_ricci_jets(geo, hj);
  const double rp = lin_scalar_jets(geo, hj, ric).value();
  Tensor p(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p(i, j) = -ric(i, j).value() + 0.5 * rp * geo.g(i, j).value() + (n - 1) * lambda * hj(i, j).value();
  return p;
}

struct BoundaryPair {
  Tensor qt;  // tensor part of Q(h)
  double qs = 0.0;
  Tensor bt;  // tensor part of (h^T - tr h^T g^T / (n-1), H'(h))
  double bs = 0.0;
};

BoundaryPair boundary_pair(const BoundaryFrame& f, const LinBoundaryJets& lj) {
  const int n = f.n;
  const int k = n - 1;
  const double c = 1.0 / (n - 1);
  const double tr = lj.tr_ht.value();
  BoundaryPair out{Tensor(k, 2), (1.0 - c) * tr, Tensor(k, 2), lj.H_prime.value()};
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      out.qt(a, b) = lj.A_prime(a, b).value() + (0.5 - c) * tr * f.A(a, b).value();
      out.bt(a, b) = lj.ht(a, b).value() - c * tr * f.gt()(a, b).value();
    }
  return out;
}

template <class F>
void for_each_face(const LinearizedContext& ctx, const DomainGrid& grid, F&& fn) {
  const Chart& chart = ctx.chart();
  if (grid.faces.size() != chart.faces.size()) throw DomainError("grid and chart have different faces");
  for (std::size_t fi = 0; fi < chart.faces.size(); ++fi) {
    const Hypersurface s(ctx.background(), chart, chart.faces[fi]);
    fn(s, grid.faces[fi]);
  }
}

void check_grid(const LinearizedContext& ctx, const DomainGrid& grid) {
  if (grid.bulk.dim != ctx.dim()) throw DomainError("grid dimension does not match the context");
}

std::vector<double> sup_reduce(const std::vector<double>& vals, std::size_t ncomp) {
  std::vector<double> out(ncomp, 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) out[i % ncomp] = std::max(out[i % ncomp], vals[i]);
  return out;
}

// Evaluates fn at every node in parallel and returns per-node values.
std::vector<double> per_node(const QuadratureGrid& grid, std::size_t ncomp,
                             const std::function<void(std::span<const double>, std::span<double>)>& fn) {
  std::vector<double> vals(grid.size() * ncomp, 0.0);
  parallel_for(grid.size(),
               [&](std::size_t i) { fn(grid.nodes[i], std::span<double>(vals.data() + i * ncomp, ncomp)); });
  return vals;
}

// ---------------------------------------------------------- generator helpers

const CoordinateMap& sph_map(int n) {
  thread_local std::vector<CoordinateMap> cache(8);
  auto& m = cache.at(static_cast<std::size_t>(n));
  if (!m.eval) m = spherical_map(n);
  return m;
}

bool is_ball_like(const Domain& d) { return d.kind != DomainKind::schwarzschild; }

struct SchwarzschildVector {
  double r0 = 0.0, s = 0.0, ell = 0.0;
  int n = 4;
  std::array<double, 3> a{}, b{};
  double c = 0.0, c2 = 0.0;
  bool vanish_at_s = false;

  void operator()(std::span<const Jet> x, std::span<Jet> out) const {
    const Jet u = (x[1] - r0) / (s - r0);
    Jet psi = ipow(u, 4);
    if (vanish_at_s) psi = psi * (1.0 - u);
    const Jet th = x[0] / (2.0 * ell);
    const Jet ct = cos(th), st = sin(th);
    for (auto& o : out) o = Jet(0.0) * psi;
    out[0] = psi * (b[0] + b[1] * ct + b[2] * st);
    out[1] = psi * (a[0] + a[1] * ct + a[2] * st);
    out[static_cast<std::size_t>(n - 1)] = psi * c;
    // gradient of cos(theta_1) on the sphere factor
    out[2] = psi * c2 * sin(x[2]) / (x[1] * x[1]);
  }
};

SchwarzschildVector schwarzschild_vector(const Domain& d, std::uint64_t seed, bool vanish) {
  Rng rng(seed);
  SchwarzschildVector v;
  v.r0 = d.root_data->r0;
  v.s = d.s;
  v.ell = d.root_data->ell;
  v.n = d.n;
  for (auto& x : v.a) x = rng.uniform();
  for (auto& x : v.b) x = rng.uniform();
  v.c = rng.uniform();
  v.c2 = rng.uniform();
  v.vanish_at_s = vanish;
  return v;
}

}  // namespace

double LbarResidual::kernel() const { return std::max({interior, traceless, mean_curv}); }

// ------------------------------------------------------------------ catalog

const std::vector<std::string>& domain_names() {
  static const std::vector<std::string> names{"euclidean-ball",  "euclidean-annulus", "hyperbolic-ball",
                                              "schwarzschild",   "ads-schwarzschild", "ds-schwarzschild"};
  return names;
}

namespace {
Domain base_domain(std::string name, DomainKind kind, int n, LinearizedContext ctx, double outer, double inner = 0.0) {
  Domain d{std::move(name), kind, n, std::move(ctx), outer, inner, std::nullopt, std::nullopt, 0.0};
  return d;
}
}  // namespace

Domain make_domain(const std::string& name, int n) {
  if (name == "euclidean-ball" || name == "euclidean-annulus" || name == "hyperbolic-ball") {
    if (n == 0) n = 3;
    if (n < 2) throw UnsupportedDimensionError("ball domains need n >= 2");
    if (name == "euclidean-ball")
      return base_domain(name, DomainKind::ball, n, LinearizedContext(euclidean_spherical(n), ball_chart(n, 1.0)),
                         1.0);
    if (name == "euclidean-annulus")
      return base_domain(name, DomainKind::annulus, n,
                         LinearizedContext(euclidean_spherical(n), annulus_chart(n, 0.5, 1.0)), 1.0, 0.5);
    return base_domain(name, DomainKind::ball, n,
                       LinearizedContext(hyperbolic_ball_spherical(n), ball_chart(n, 0.5)), 0.5);
  }
  double lambda = 0.0;
  if (name == "schwarzschild") {
    lambda = 0.0;
  } else if (name == "ads-schwarzschild") {
    lambda = -1.0;
  } else if (name == "ds-schwarzschild") {
    lambda = 1.0 / 64.0;
  } else {
    throw DomainError("unknown domain '" + name + "'");
  }
  if (n == 0) n = 4;
  const auto p = make_params(n, lambda, 1.0);
  const auto rd = roots(p);
  double s = 1.5 * rd.r0;
  if (!(s < rd.r1)) s = 0.5 * (rd.r0 + rd.r1);
  Domain d = base_domain(name, DomainKind::schwarzschild, n,
                         LinearizedContext(schwarzschild_metric(p, rd), schwarzschild_chart(p, rd, s)), s);
  d.params = p;
  d.root_data = rd;
  d.s = s;
  return d;
}

DomainGrid make_grid(const Domain& d, int level) { return domain_grid(d.chart(), level); }

// --------------------------------------------------------------- generators

SymTensorField random_field(const Domain& d, std::uint64_t seed) {
  if (is_ball_like(d)) {
    Rng rng(seed);
    return pullback(sph_map(d.n), random_sym_tensor(d.n, rng));
  }
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const double c1 = rng.uniform(), c2 = rng.uniform();
  const double r0 = d.root_data->r0, s = d.s;
  const auto phi = ScalarField::analytic(d.n, [=](std::span<const Jet> x) {
    const Jet u = (x[1] - r0) / (s - r0);
    return 1.0 + c1 * u + c2 * u * u;
  });
  return scaled(phi, lie_derivative(random_vector_field(d, seed), d.metric()));
}

VectorField random_vector_field(const Domain& d, std::uint64_t seed) {
  if (is_ball_like(d)) {
    Rng rng(seed);
    return pullback(sph_map(d.n), random_vector(d.n, rng));
  }
  return VectorField::analytic(d.n, schwarzschild_vector(d, seed, false));
}

VectorField trivial_kernel_vector(const Domain& d, std::uint64_t seed) {
  if (is_ball_like(d)) {
    Rng rng(seed);
    const VectorField p = random_vector(d.n, rng);
    const auto cart = VectorField::analytic(d.n, [p, inner = d.inner, outer = d.outer,
                                                  kind = d.kind](std::span<const Jet> y, std::span<Jet> out) {
      Jet r2(0.0);
      for (const auto& v : y) r2 += v * v;
      const Jet cut = kind == DomainKind::ball ? outer * outer - r2 : (r2 - inner * inner) * (outer * outer - r2);
      const JTensor pv = p.apply(y);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = cut * pv(static_cast<int>(i));
    });
    return pullback(sph_map(d.n), cart);
  }
  return VectorField::analytic(d.n, schwarzschild_vector(d, seed, true));
}

SymTensorField trivial_kernel(const Domain& d, std::uint64_t seed) {
  return lie_derivative(trivial_kernel_vector(d, seed), d.metric());
}

VectorField conformal_vector(const Domain& d, std::span<const double> c) {
  if (d.kind != DomainKind::ball) throw DomainError("conformal generator needs a ball domain");
  if (static_cast<int>(c.size()) != d.n) throw DomainError("conformal generator: c has the wrong length");
  const std::vector<double> cv(c.begin(), c.end());
  const double r2 = d.outer * d.outer;
  const auto cart = VectorField::analytic(d.n, [cv, r2](std::span<const Jet> y, std::span<Jet> out) {
    Jet cy(0.0);
    for (std::size_t i = 0; i < y.size(); ++i) cy += cv[i] * y[i];
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = cv[i] - cy * y[i] / r2;
  });
  return pullback(sph_map(d.n), cart);
}

SymTensorField conformal_kernel(const Domain& d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(static_cast<std::size_t>(d.n));
  for (auto& x : c) x = rng.uniform();
  return lie_derivative(conformal_vector(d, c), d.metric());
}

SymTensorField random_chart_field(const Domain& d, std::uint64_t seed) {
  Rng rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<double> k(static_cast<std::size_t>(d.n));
  for (auto& v : k) v = rng.uniform();
  const auto phi = ScalarField::analytic(d.n, [k](std::span<const Jet> x) {
    Jet arg(0.0);
    for (std::size_t i = 0; i < k.size(); ++i) arg += k[i] * x[i];
    return 1.0 + 0.5 * sin(arg);
  });
  return scaled(phi, random_sym_tensor(d.n, rng));
}

SymTensorField bump_field(const Domain& d, std::uint64_t seed) {
  ScalarField cut;
  if (d.kind == DomainKind::schwarzschild) {
    const double r0 = d.root_data->r0, s = d.s;
    cut = ScalarField::analytic(d.n, [=](std::span<const Jet> x) { return ipow((s - x[1]) / (s - r0), 3); });
  } else {
    const double a = d.inner, b = d.outer;
    const bool ball = d.kind == DomainKind::ball;
    cut = ScalarField::analytic(d.n, [=](std::span<const Jet> x) {
      const Jet r2 = x[0] * x[0];
      return ball ? ipow(1.0 - r2 / (b * b), 3) : ipow((r2 - a * a) * (b * b - r2), 3);
    });
  }
  return scaled(cut, random_field(d, seed));
}

// --------------------------------------------------------------- identities

GreenTerms green_terms(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& w,
                       const DomainGrid& grid) {
  check_grid(ctx, grid);
  const double lam = ctx.lambda();
  const auto bulk = integrate(grid.bulk, 2, [&](std::span<const double> x, std::span<double> out) {
    const auto geo = local_geometry(ctx.background(), x, 2);
    const JTensor hj = h.jets(x, 2);
    const JTensor wj = w.jets(x, 2);
    const Tensor gi = values(geo.ginv);
    const double vol = sqrt_det(geo);
    out[0] = inner2(p_value(geo, lam, hj), values(wj), gi) * vol;
    out[1] = inner2(p_value(geo, lam, wj), values(hj), gi) * vol;
  });
  GreenTerms t;
  t.bulk_hw = bulk[0];
  t.bulk_wh = bulk[1];
  std::vector<double> bhw, bwh;
  for_each_face(ctx, grid, [&](const Hypersurface& s, const QuadratureGrid& fg) {
    const auto r = integrate(fg, 2, [&](std::span<const double> u, std::span<double> out) {
      const auto f = s.frame(u, 2);
      const auto x = s.embed(u);
      const auto ph = boundary_pair(f, lin_boundary_jets(f, h.jets(x, 1)));
      const auto pw = boundary_pair(f, lin_boundary_jets(f, w.jets(x, 1)));
      const Tensor gi = values(f.gt_inv());
      const double area = f.area.value();
      out[0] = (inner2(ph.qt, pw.bt, gi) + ph.qs * pw.bs) * area;
      out[1] = (inner2(pw.qt, ph.bt, gi) + pw.qs * ph.bs) * area;
    });
    bhw.push_back(r[0]);
    bwh.push_back(r[1]);
  });
  t.boundary_hw = compensated_sum(bhw);
  t.boundary_wh = compensated_sum(bwh);
  t.residual = (t.bulk_hw - t.boundary_hw) - (t.bulk_wh - t.boundary_wh);
  return t;
}

double green_residual(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& w,
                      const DomainGrid& grid) {
  return green_terms(ctx, h, w, grid).residual;
}

double volume(const LinearizedContext& ctx, const DomainGrid& grid) {
  check_grid(ctx, grid);
  return integrate(grid.bulk, [&](std::span<const double> x) {
    return std::sqrt(determinant_spd(ctx.background().metric_jets(x, 0)).value());
  });
}

LbarResidual lbar_components(const LinearizedContext& ctx, const SymTensorField& h, double b,
                             const DomainGrid& grid, double max_condition) {
  check_grid(ctx, grid);
  const int n = ctx.dim();
  const double lam = ctx.lambda();
  LbarResidual r;
  // per node: interior defect (-1 when skipped), tr h sqrt g, sqrt g
  const auto vals = per_node(grid.bulk, 3, [&](std::span<const double> x, std::span<double> out) {
    const auto geo = local_geometry(ctx.background(), x, 2);
    const JTensor hj = h.jets(x, 2);
    const Tensor gv = values(geo.g);
    const Tensor gi = values(geo.ginv);
    const double vol = sqrt_det(geo);
    out[1] = trace2(values(hj), gi) * vol;
    out[2] = vol;
    if (1.0 / (min_eigenvalue(gv) * min_eigenvalue(gi)) > max_condition) {
      out[0] = -1.0;
      return;
    }
    const JTensor ric = lin_ricci_jets(geo, hj);
    Tensor k(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        k(i, j) = ric(i, j).value() - (n - 1) * lam * (hj(i, j).value() + b * gv(i, j));
    out[0] = norm(k, gi);
  });
  std::vector<double> tr_terms(grid.bulk.size()), vol_terms(grid.bulk.size());
  for (std::size_t i = 0; i < grid.bulk.size(); ++i) {
    if (vals[3 * i] < 0.0) {
      ++r.skipped_nodes;
    } else {
      ++r.interior_nodes;
      r.interior = std::max(r.interior, vals[3 * i]);
    }
    tr_terms[i] = grid.bulk.weights[i] * vals[3 * i + 1];
    vol_terms[i] = grid.bulk.weights[i] * vals[3 * i + 2];
  }
  r.volume_ref = compensated_sum(vol_terms);
  r.volume = compensated_sum(tr_terms) + n * r.volume_ref * b;

  for_each_face(ctx, grid, [&](const Hypersurface& s, const QuadratureGrid& fg) {
    const auto bv = per_node(fg, 3, [&](std::span<const double> u, std::span<double> out) {
      const auto f = s.frame(u, 2);
      const auto lj = lin_boundary_jets(f, h.jets(s.embed(u), 1));
      const auto pr = boundary_pair(f, lj);
      out[0] = norm(pr.bt, values(f.gt_inv()));
      out[1] = std::abs(pr.bs);
      out[2] = std::abs(lj.tr_ht.value());
    });
    const auto sup = sup_reduce(bv, 3);
    r.traceless = std::max(r.traceless, sup[0]);
    r.mean_curv = std::max(r.mean_curv, sup[1]);
    r.trace_sup = std::max(r.trace_sup, sup[2]);
  });
  return r;
}

ZeroMean zero_mean_residual(const LinearizedContext& ctx, const SymTensorField& h, const DomainGrid& grid) {
  check_grid(ctx, grid);
  const int n = ctx.dim();
  ZeroMean z;
  const auto l = lbar_components(ctx, h, 0.0, grid);
  z.hypothesis = l.kernel();
  std::vector<double> faces;
  for_each_face(ctx, grid, [&](const Hypersurface& s, const QuadratureGrid& fg) {
    faces.push_back(integrate(fg, [&](std::span<const double> u) {
      const auto f = s.frame(u, 2);
      const auto lj = lin_boundary_jets(f, h.jets(s.embed(u), 1));
      return lj.tr_ht.value() * f.H.value() * f.area.value();
    }));
  });
  z.lhs = compensated_sum(faces);
  z.rhs = -(n - 1.0) * (n - 1.0) * ctx.lambda() * l.volume;  // b = 0: volume row is int tr h
  z.residual = std::abs(z.lhs - z.rhs);
  return z;
}

HiddenBC hidden_bc_residuals(const LinearizedContext& ctx, const SymTensorField& h, double b,
                             const DomainGrid& grid, double hypothesis_tol) {
  check_grid(ctx, grid);
  const int n = ctx.dim();
  const int k = n - 1;
  const double c = 1.0 / (n - 1);
  const double lam = ctx.lambda();
  HiddenBC r;
  r.hypothesis = lbar_components(ctx, h, b, grid).kernel();
  r.applicable = r.hypothesis < hypothesis_tol;
  for_each_face(ctx, grid, [&](const Hypersurface& s, const QuadratureGrid& fg) {
    const auto vals = per_node(fg, 3, [&](std::span<const double> u, std::span<double> out) {
      const auto f = s.frame(u, 3);
      const auto lj = lin_boundary_jets(f, h.jets(s.embed(u), 2));
      const JTensor& gi = f.gt_inv();
      JTensor t(k, 2);
      for (int a = 0; a < k; ++a)
        for (int e = 0; e < k; ++e) t(a, e) = lj.A_prime(a, e) - c * lj.tr_ht * f.A(a, e);
      const JTensor dt = covariant_derivative(t, f.sg);  // (a, e, m) = T_{ae|m}
      Tensor r1(k, 1);
      for (int e = 0; e < k; ++e) {
        double div = 0.0, rhs = 0.0;
        for (int a = 0; a < k; ++a)
          for (int m = 0; m < k; ++m) {
            div += gi(a, m).value() * dt(a, e, m).value();
            rhs += (f.A(a, e).value() - c * f.H.value() * f.gt()(a, e).value()) * gi(a, m).value() *
                   lj.tr_ht.d(m);
          }
        r1(e) = -2.0 * div - rhs;
      }
      const Tensor giv = values(gi);
      const double at = inner2(values(f.A), values(t), giv);
      const double lv = L_sigma_jets(f.sg, n, lj.tr_ht).value();
      out[0] = norm(r1, giv);
      out[1] = std::abs(2.0 * at + (n - 2.0) / (n - 1.0) * lv - (n - 1.0) * (n - 2.0) * lam * b);
      out[2] = std::abs(lv);
    });
    const auto sup = sup_reduce(vals, 3);
    r.hb1 = std::max(r.hb1, sup[0]);
    r.hb2 = std::max(r.hb2, sup[1]);
    r.l_sigma_trace = std::max(r.l_sigma_trace, sup[2]);
  });
  return r;
}

QuadraticForm nondegenerate_quadratic_form(const Hypersurface& sigma, const ScalarField& v,
                                           const QuadratureGrid& surface_grid) {
  if (surface_grid.dim != sigma.dim()) throw DomainError("surface grid dimension does not match");
  const int n = sigma.ambient_dim();
  const auto r = integrate(surface_grid, 4, [&](std::span<const double> u, std::span<double> out) {
    const auto f = sigma.frame(u, 2);
    const Jet vj = v.jet(u, 2);
    const double lv = L_sigma_jets(f.sg, n, vj).value();
    const double a = f.area.value();
    const double vv = vj.value();
    out[0] = vv * lv * a;
    out[1] = f.H.value() * vv * lv * a;
    out[2] = vv * f.H.value() * a;
    out[3] = vv * vv * a;
  });
  return QuadraticForm{r[0], r[1], r[2], r[3]};
}

double divergence_theorem_residual(const LinearizedContext& ctx, const VectorField& xf, const DomainGrid& grid) {
  check_grid(ctx, grid);
  const int n = ctx.dim();
  const double bulk = integrate(grid.bulk, [&](std::span<const double> x) {
    const auto geo = local_geometry(ctx.background(), x, 1);
    const JTensor xv = xf.jets(x, 1);
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
      div += xv(i).d(i);
      for (int k = 0; k < n; ++k) div += geo.christoffel(i, i, k).value() * xv(k).value();
    }
    return div * sqrt_det(geo);
  });
  std::vector<double> flux;
  for_each_face(ctx, grid, [&](const Hypersurface& s, const QuadratureGrid& fg) {
    flux.push_back(integrate(fg, [&](std::span<const double> u) {
      const auto f = s.frame(u, 1);
      const JTensor xv = xf.jets(s.embed(u), 0);
      double xn = 0.0;
      for (int i = 0; i < n; ++i) xn += xv(i).value() * f.nu_lower(i).value();
      return xn * f.area.value();
    }));
  });
  return bulk - compensated_sum(flux);
}

Adjointness adjointness_residual(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& gamma,
                                 const DomainGrid& grid) {
  check_grid(ctx, grid);
  const int n = ctx.dim();
  const double lam = ctx.lambda();
  const auto r = integrate(grid.bulk, 2, [&](std::span<const double> x, std::span<double> out) {
    const auto geo = local_geometry(ctx.background(), x, 2);
    const JTensor hj = h.jets(x, 2);
    const JTensor gj = gamma.jets(x, 2);
    const JTensor ric = lin_ricci_jets(geo, hj);
    const JTensor adj = lin_einstein_adjoint_jets(geo, lam, gj);
    Tensor kh(n, 2), ks(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        kh(i, j) = ric(i, j).value() - (n - 1) * lam * hj(i, j).value();
        ks(i, j) = adj(i, j).value() - (n - 1) * lam * gj(i, j).value();
      }
    const Tensor gi = values(geo.ginv);
    const double vol = sqrt_det(geo);
    out[0] = inner2(kh, values(gj), gi) * vol;
    out[1] = inner2(values(hj), ks, gi) * vol;
  });
  return Adjointness{r[0], r[1], r[0] - r[1]};
}

}  // namespace einlab
