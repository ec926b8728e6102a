#include "einlab/oracle.hpp"

#include <cmath>

namespace einlab {

namespace {
void accumulate(OracleError& e, std::span<const double> analytic, std::span<const double> fd) {
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    e.max_abs = std::max(e.max_abs, std::abs(analytic[i] - fd[i]));
    e.scale = std::max(e.scale, std::abs(fd[i]));
  }
}
// Keeps g + step h well inside the metric cone when h is large against g.
double fd_step(const SymTensorField& g, const SymTensorField& h, std::span<const double> x) {
  const double gh = max_abs(h.values(x));
  const double gg = max_abs(g.values(x));
  return gh > gg ? 1e-2 * gg / gh : 1e-2;
}
}  // namespace

OracleError lin_ricci_vs_fd(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x) {
  const Tensor an = lin_ricci(ctx, h, x);
  const std::vector<double> xs(x.begin(), x.end());
  const auto fd = fd_directional(ctx.background(), h,
                                 [&](const MetricField& gs) { return flatten(ricci(gs, xs)); },
                                 fd_step(ctx.background(), h, x));
  OracleError e;
  accumulate(e, an.data(), fd.value);
  return e;
}

BoundaryOracle lin_boundary_vs_fd(const Hypersurface& s, const SymTensorField& h, std::span<const double> u) {
  const auto lb = lin_boundary(s, h, u);
  const std::vector<double> us(u.begin(), u.end());
  const Face face = s.face();
  const int k = s.dim();
  const auto fd = fd_directional(s.metric(), h, [&](const MetricField& gs) {
    const auto f = boundary_frame(gs.metric_jets(s.embed(us), 2), face.coord, face.orientation);
    std::vector<double> out;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) out.push_back(f.A(a, b).value());
    out.push_back(f.H.value());
    for (int i = 0; i < s.ambient_dim(); ++i) out.push_back(f.nu_upper(i).value());
    return out;
  }, fd_step(s.metric(), h, s.embed(us)));
  BoundaryOracle r;
  const auto kk = static_cast<std::size_t>(k * k);
  const std::span<const double> fv(fd.value);
  accumulate(r.A_prime, lb.A_prime.data(), fv.subspan(0, kk));
  const double hp[1] = {lb.H_prime};
  accumulate(r.H_prime, hp, fv.subspan(kk, 1));
  accumulate(r.nu_prime, lb.nu_prime.data(), fv.subspan(kk + 1));
  return r;
}

double trace_identity_residual(const Hypersurface& s, const SymTensorField& h, std::span<const double> u) {
  const auto lb = lin_boundary(s, h, u);
  const auto sv = surface_values(s, u);
  const int k = s.dim();
  double tra = 0.0, ah = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      tra += sv.gt_inv(a, b) * lb.A_prime(a, b);
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) ah += sv.gt_inv(a, c) * sv.gt_inv(b, d) * sv.A(a, b) * lb.ht(c, d);
    }
  return tra - lb.H_prime - ah;
}

}  // namespace einlab
