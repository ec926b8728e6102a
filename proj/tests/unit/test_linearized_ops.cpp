#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "einlab/error.hpp"
#include "einlab/green.hpp"
#include "einlab/oracle.hpp"

using namespace einlab;

namespace {
const std::vector<std::string> kBackgrounds{"euclidean-ball", "hyperbolic-ball", "schwarzschild",
                                            "ads-schwarzschild", "ds-schwarzschild"};
}

class Backgrounds : public ::testing::TestWithParam<std::string> {};

TEST_P(Backgrounds, ContextIsEinstein) {
  const Domain d = make_domain(GetParam());
  EXPECT_LT(d.ctx.background_residual(), 1e-8);
  EXPECT_FALSE(d.ctx.points().empty());
}

TEST_P(Backgrounds, RicciIsScaleInvariant) {
  const Domain d = make_domain(GetParam());
  for (const auto& x : d.ctx.points()) EXPECT_LT(max_abs(lin_ricci(d.ctx, d.metric(), x)), 1e-10);
}

TEST_P(Backgrounds, LinRicciMatchesFiniteDifferences) {
  const Domain d = make_domain(GetParam());
  for (std::uint64_t seed : {3u, 4u}) {
    const auto h = random_field(d, seed);
    for (const auto& x : d.ctx.points()) EXPECT_LT(lin_ricci_vs_fd(d.ctx, h, x).mixed(), 1e-6);
  }
}

TEST_P(Backgrounds, LieDerivativeOfEinsteinMetric) {
  // Ric'(L_X g) = L_X Ric = (n-1) Lambda L_X g
  const Domain d = make_domain(GetParam());
  const auto h = lie_derivative(random_vector_field(d, 5), d.metric());
  const double c = (d.n - 1) * d.ctx.lambda();
  for (const auto& x : d.ctx.points()) {
    const Tensor r = lin_ricci(d.ctx, h, x);
    const Tensor hv = h.values(x);
    double worst = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      worst = std::max(worst, std::abs(r[i] - c * hv[i]));
      scale = std::max(scale, std::abs(r[i]));
    }
    EXPECT_LT(worst / scale, 1e-9);
  }
}

TEST_P(Backgrounds, BianchiOfKillingIsVectorLaplacian) {
  const Domain d = make_domain(GetParam());
  for (std::uint64_t seed : {1u, 2u}) {
    const auto x = random_vector_field(d, seed);
    for (const auto& p : d.ctx.points()) {
      const auto ginv = values(local_geometry(d.metric(), p, 0).ginv);
      EXPECT_LT(norm(laplace0_residual(d.ctx, x, p), ginv), 1e-7);
    }
  }
}

TEST_P(Backgrounds, AdjointIsDivergenceFree) {
  const Domain d = make_domain(GetParam());
  const auto gamma = d.kind == DomainKind::schwarzschild ? random_chart_field(d, 9) : random_field(d, 9);
  EXPECT_LT(adjoint_divergence_residual(d.ctx, gamma, d.ctx.points()), 1e-6);
}

TEST_P(Backgrounds, PRecombination) {
  const Domain d = make_domain(GetParam());
  const auto h = random_field(d, 11);
  for (const auto& x : d.ctx.points()) EXPECT_LT(operator_P_checked(d.ctx, h, x).discrepancy, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Einstein, Backgrounds, ::testing::ValuesIn(kBackgrounds),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& c : s)
                             if (c == '-') c = '_';
                           return s;
                         });

TEST(LinRicci, DetectsAWrongSign) {
  // the oracle is sensitive: a perturbed answer fails it
  const Domain d = make_domain("hyperbolic-ball");
  const auto h = random_field(d, 3);
  const auto& x = d.ctx.points().front();
  const Tensor an = lin_ricci(d.ctx, h, x);
  const auto fd = fd_directional(d.metric(), h, [&](const MetricField& gs) { return flatten(ricci(gs, x)); });
  double diff = 0.0;
  for (std::size_t i = 0; i < an.size(); ++i) diff = std::max(diff, std::abs(-an[i] - fd.value[i]));
  EXPECT_GT(diff, 1e-3);
}

TEST(Dilation, ScalingIdentities) {
  for (const char* name : {"euclidean-ball", "euclidean-annulus"}) {
    const Domain d = make_domain(name);
    const auto nodes = make_grid(d, 3).faces.at(0).nodes;
    for (double t : {0.1, 0.25, 0.6}) {
      const auto r = dilation_scaling_check(d.ctx, random_field(d, 2), t, nodes);
      EXPECT_LT(r.ricci, 1e-8);
      EXPECT_LT(r.traceless, 1e-8);
      EXPECT_LT(r.mean_curv, 1e-8);
    }
  }
}

TEST(Dilation, RejectsParameterOutsideUnitInterval) {
  const Domain d = make_domain("euclidean-ball");
  const auto nodes = make_grid(d, 2).faces.at(0).nodes;
  EXPECT_THROW(dilation_scaling_check(d.ctx, d.metric(), 1.0, nodes), DomainError);
  EXPECT_THROW(dilation_scaling_check(d.ctx, d.metric(), 0.0, nodes), DomainError);
}

TEST(Context, RejectsNonEinsteinBackground) {
  Rng rng(4);
  const auto bumpy = MetricField(euclidean_metric(3) + 0.2 * random_sym_tensor(3, rng), 0.0);
  const Chart c({{-0.3, 0.3}, {-0.3, 0.3}, {-0.3, 0.3}},
                {CoordKind::interval, CoordKind::interval, CoordKind::interval});
  EXPECT_THROW(LinearizedContext(bumpy, c), ConsistencyError);
  EXPECT_THROW(LinearizedContext(MetricField(static_cast<const SymTensorField&>(euclidean_metric(3))), c), DomainError);
}

TEST(Context, TrivialKernelSolvesInteriorEquation) {
  for (const char* name : {"euclidean-ball", "hyperbolic-ball", "ds-schwarzschild"}) {
    const Domain d = make_domain(name);
    const auto h = trivial_kernel(d, 4);
    const double c = (d.n - 1) * d.ctx.lambda();
    for (const auto& x : d.ctx.points()) {
      const Tensor r = lin_ricci(d.ctx, h, x);
      const Tensor hv = h.values(x);
      for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], c * hv[i], 1e-8 * (1 + std::abs(r[i])));
    }
  }
}
