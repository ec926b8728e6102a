#include "einlab/linearized.hpp"

#include <algorithm>
#include <cmath>

#include "einlab/error.hpp"

namespace einlab {

std::vector<std::vector<double>> interior_points(const Chart& chart) {
  const int n = chart.dim;
  std::vector<std::vector<double>> pts;
  std::vector<double> center(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& [lo, hi] = chart.box[static_cast<std::size_t>(i)];
    center[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
  }
  pts.push_back(center);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& [lo, hi] = chart.box[static_cast<std::size_t>(i)];
      const double frac = (mask >> i) & 1 ? 0.75 : 0.25;
      // Slight irrational shift keeps samples off symmetry planes.
      p[static_cast<std::size_t>(i)] = lo + (frac + 0.0137 * (i + 1)) * (hi - lo);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

LinearizedContext::LinearizedContext(MetricField background, Chart chart, std::vector<std::vector<double>> points,
                                     double tolerance)
    : g_(std::move(background)), chart_(std::move(chart)), points_(std::move(points)) {
  chart_.validate();
  if (g_.dim() != chart_.dim) throw DomainError("background metric and chart dimensions differ");
  if (!g_.einstein_constant()) throw DomainError("linearized context needs an Einstein constant");
  lambda_ = *g_.einstein_constant();
  if (points_.empty()) points_ = interior_points(chart_);
  residual_ = einstein_residual(g_, lambda_, points_);
  if (!(residual_ < tolerance)) {
    throw ConsistencyError("background is not Einstein on the working points (residual " +
                           std::to_string(residual_) + ")");
  }
}

namespace {

JTensor symmetrize(const JTensor& t) {
  const int n = t.dim();
  JTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out(i, j) = 0.5 * (t(i, j) + t(j, i));
      out(j, i) = out(i, j);
    }
  return out;
}

JTensor raise_both(const JTensor& h, const JTensor& ginv) {
  const int n = h.dim();
  JTensor half(n, 2);  // h^a_j = g^{ai} h_ij
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) {
      Jet s(0.0);
      for (int i = 0; i < n; ++i) s += ginv(a, i) * h(i, j);
      half(a, j) = s;
    }
  JTensor up(n, 2);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Jet s(0.0);
      for (int j = 0; j < n; ++j) s += half(a, j) * ginv(j, b);
      up(a, b) = s;
      up(b, a) = s;
    }
  return up;
}

void require_order(const JTensor& t, int needed, const char* what) {
  if (min_order(t) < needed) {
    throw CapabilityError(std::string(what) + " needs derivatives of order " + std::to_string(needed));
  }
}

}  // namespace

JTensor curvature_action_jets(const LocalGeometry& geo, const JTensor& h) {
  if (!geo.has_curvature()) throw CapabilityError("curvature action needs metric jets of order >= 2");
  const int n = geo.n;
  const JTensor up = raise_both(h, geo.ginv);
  JTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s(0.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += geo.riemann(i, k, l, j) * up(k, l);
      out(i, j) = s;
    }
  return symmetrize(out);
}

JTensor lin_ricci_jets(const LocalGeometry& geo, const JTensor& h) {
  require_order(h, 2, "linearized Ricci");
  if (!geo.has_curvature()) throw CapabilityError("linearized Ricci needs metric jets of order >= 2");
  const int n = geo.n;
  const JTensor dh = covariant_derivative(h, geo);
  const JTensor ddh = covariant_derivative(dh, geo);  // (i, j, k, l) = h_{ij;kl}
  const Jet tr = trace(h, geo.ginv);
  JTensor trt(n, 0);
  trt[0] = tr;
  const JTensor hess = covariant_derivative(covariant_derivative(trt, geo), geo);
  const JTensor& gi = geo.ginv;

  JTensor mixed(n, 2);  // h^l_j = g^{lm} h_mj
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      Jet s(0.0);
      for (int m = 0; m < n; ++m) s += gi(l, m) * h(m, j);
      mixed(l, j) = s;
    }
  const JTensor rh = curvature_action_jets(geo, h);

  JTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet s(0.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Jet& gkl = gi(k, l);
          s += gkl * (-0.5 * ddh(i, j, k, l) + 0.5 * (ddh(i, k, l, j) + ddh(j, k, l, i)));
        }
      s -= 0.5 * hess(i, j);
      for (int l = 0; l < n; ++l) s += 0.5 * (geo.ricci(i, l) * mixed(l, j) + geo.ricci(j, l) * mixed(l, i));
      s -= rh(i, j);
      out(i, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

Jet lin_scalar_jets(const LocalGeometry& geo, const JTensor& h, const JTensor& ric_prime) {
  return trace(ric_prime, geo.ginv) - inner(h, geo.ricci, geo.ginv);
}

JTensor divergence_jets(const LocalGeometry& geo, const JTensor& t) {
  const int n = geo.n;
  const JTensor dt = covariant_derivative(t, geo);
  JTensor out(n, 1);
  for (int j = 0; j < n; ++j) {
    Jet s(0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) s += geo.ginv(i, k) * dt(i, j, k);
    out(j) = s;
  }
  return out;
}

JTensor bianchi_jets(const LocalGeometry& geo, const JTensor& h) {
  require_order(h, 1, "Bianchi operator");
  const int n = geo.n;
  const JTensor div = divergence_jets(geo, h);
  const Jet tr = trace(h, geo.ginv);
  JTensor out(n, 1);
  for (int j = 0; j < n; ++j) out(j) = -div(j) + 0.5 * tr.derivative(j);
  return out;
}

JTensor killing_jets(const LocalGeometry& geo, const JTensor& x_upper) {
  require_order(x_upper, 1, "Killing operator");
  const JTensor xl = lower(x_upper, geo.g);
  const JTensor dx = covariant_derivative(xl, geo);  // (i, k) = X_{i;k}
  const int n = geo.n;
  JTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out(i, j) = 0.5 * (dx(i, j) + dx(j, i));
      out(j, i) = out(i, j);
    }
  return out;
}

JTensor laplacian_jets(const LocalGeometry& geo, const JTensor& t) {
  const int n = geo.n;
  const JTensor dd = covariant_derivative(covariant_derivative(t, geo), geo);
  if (t.rank() == 1) {
    JTensor out(n, 1);
    for (int i = 0; i < n; ++i) {
      Jet s(0.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += geo.ginv(k, l) * dd(i, k, l);
      out(i) = s;
    }
    return out;
  }
  if (t.rank() == 2) {
    JTensor out(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet s(0.0);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += geo.ginv(k, l) * dd(i, j, k, l);
        out(i, j) = s;
      }
    return out;
  }
  throw DomainError("laplacian supports rank 1 and 2 tensors");
}

JTensor lin_einstein_adjoint_jets(const LocalGeometry& geo, double lambda, const JTensor& gamma) {
  require_order(gamma, 2, "adjoint linearized Einstein operator");
  const int n = geo.n;
  const JTensor lap = laplacian_jets(geo, gamma);
  const JTensor div = divergence_jets(geo, gamma);  // one-form
  // beta^* V = (L_V g - (div V) g) / 2 with V = (Div gamma)^#.
  const JTensor dv = covariant_derivative(div, geo);
  Jet divv(0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) divv += geo.ginv(i, k) * dv(i, k);
  const JTensor rg = curvature_action_jets(geo, gamma);
  JTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Jet beta_star = 0.5 * (dv(i, j) + dv(j, i) - divv * geo.g(i, j));
      out(i, j) = -0.5 * lap(i, j) + beta_star - rg(i, j) + (n - 1) * lambda * gamma(i, j);
      out(j, i) = out(i, j);
    }
  return symmetrize(out);
}

// ---------------------------------------------------------------- pointwise

Tensor lin_ricci(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  return values(lin_ricci_jets(geo, h.jets(x, 2)));
}

double lin_scalar(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  const JTensor hj = h.jets(x, 2);
  return lin_scalar_jets(geo, hj, lin_ricci_jets(geo, hj)).value();
}

Tensor bianchi(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 1);
  return values(bianchi_jets(geo, h.jets(x, 1)));
}

Tensor killing(const LinearizedContext& ctx, const VectorField& x_field, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 1);
  return values(killing_jets(geo, x_field.jets(x, 1)));
}

Tensor operator_K(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  const JTensor hj = h.jets(x, 2);
  Tensor k = values(lin_ricci_jets(geo, hj));
  const int n = geo.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k(i, j) -= (n - 1) * ctx.lambda() * hj(i, j).value();
  return k;
}

PCheck operator_P_checked(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  const JTensor hj = h.jets(x, 2);
  const JTensor ric = lin_ricci_jets(geo, hj);
  const double rprime = lin_scalar_jets(geo, hj, ric).value();
  const int n = geo.n;
  const double lam = ctx.lambda();
  PCheck out;
  out.P = Tensor(n, 2);
  Tensor k(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double g = geo.g(i, j).value();
      const double hv = hj(i, j).value();
      out.P(i, j) = -ric(i, j).value() + 0.5 * rprime * g + (n - 1) * lam * hv;
      k(i, j) = ric(i, j).value() - (n - 1) * lam * hv;
    }
  const Tensor gi = values(geo.ginv);
  double trk = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trk += gi(i, j) * k(i, j);
  out.recombined = Tensor(n, 2);
  double scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.recombined(i, j) = -k(i, j) + 0.5 * trk * geo.g(i, j).value();
      out.discrepancy = std::max(out.discrepancy, std::abs(out.recombined(i, j) - out.P(i, j)));
      scale = std::max(scale, std::abs(out.P(i, j)));
    }
  out.discrepancy /= scale;
  return out;
}

Tensor operator_P(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  return operator_P_checked(ctx, h, x).P;
}

Tensor lin_einstein_adjoint(const LinearizedContext& ctx, const SymTensorField& gamma, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  return values(lin_einstein_adjoint_jets(geo, ctx.lambda(), gamma.jets(x, 2)));
}

double adjoint_divergence_residual(const LinearizedContext& ctx, const SymTensorField& gamma,
                                   std::span<const std::vector<double>> points) {
  double worst = 0.0;
  for (const auto& x : points) {
    const auto geo = local_geometry(ctx.background(), x, 3);
    const JTensor gj = gamma.jets(x, 3);
    JTensor t = lin_einstein_adjoint_jets(geo, ctx.lambda(), gj);
    const int n = geo.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) -= (n - 1) * ctx.lambda() * gj(i, j).truncated(1);
    const Tensor div = values(divergence_jets(geo, t));
    worst = std::max(worst, norm(div, values(geo.ginv)));
  }
  return worst;
}

Tensor laplace0_residual(const LinearizedContext& ctx, const VectorField& x_field, std::span<const double> x) {
  const auto geo = local_geometry(ctx.background(), x, 2);
  const JTensor xu = x_field.jets(x, 2);
  const JTensor bd = bianchi_jets(geo, killing_jets(geo, xu));
  const JTensor lap = laplacian_jets(geo, lower(xu, geo.g));
  const int n = geo.n;
  Tensor out(n, 1);
  for (int j = 0; j < n; ++j) {
    double ric = 0.0;
    for (int k = 0; k < n; ++k) ric += geo.ricci(j, k).value() * xu(k).value();
    out(j) = bd(j).value() + 0.5 * (lap(j).value() + ric);
  }
  return out;
}

SymTensorField lie_derivative(const VectorField& x_field, const MetricField& g) {
  const int n = g.dim();
  if (!x_field.field().composable() || !g.field().composable()) {
    throw CapabilityError("lie_derivative needs analytic vector and metric fields");
  }
  return SymTensorField::analytic(
      n,
      [x_field, g, n](std::span<const Jet> x, JTensor& out) {
        const JTensor xv = x_field.apply(x);
        const JTensor gj = g.apply(x);
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            Jet s(0.0);
            for (int k = 0; k < n; ++k) {
              s += xv(k).truncated(xv(k).order() - 1) * gj(i, j).derivative(k);
              s += gj(k, j).truncated(gj(k, j).order() - 1) * xv(k).derivative(i);
              s += gj(i, k).truncated(gj(i, k).order() - 1) * xv(k).derivative(j);
            }
            out(i, j) = s;
          }
      },
      1);
}

}  // namespace einlab
