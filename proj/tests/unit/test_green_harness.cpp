#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "einlab/error.hpp"
#include "einlab/green.hpp"

using namespace einlab;

TEST(Quadrature, GaussLegendreExactness) {
  for (int m : {1, 2, 5, 8}) {
    const auto rule = gauss_legendre(m, -1.0, 2.0);
    for (int deg = 0; deg < 2 * m; ++deg) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::pow(rule.nodes[i], deg);
      const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
      EXPECT_NEAR(q, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "m = " << m << " deg = " << deg;
    }
  }
}

TEST(Quadrature, TrapezoidIsSpectralOnPeriodicFunctions) {
  const auto rule = periodic_trapezoid(16, 0.0, 2 * std::numbers::pi);
  double q = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) q += rule.weights[i] * std::exp(std::cos(rule.nodes[i]));
  EXPECT_NEAR(q, 2 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0), 1e-13);
}

TEST(Quadrature, CompensatedSum) {
  std::vector<double> v{1.0, 1e100, 1.0, -1e100};
  EXPECT_EQ(compensated_sum(v), 2.0);
}

TEST(Quadrature, ParallelResultsDoNotDependOnThreadCount) {
  const Domain d = make_domain("euclidean-ball");
  const auto g = make_grid(d, 3);
  const auto h = random_field(d, 1), w = random_field(d, 2);
  set_thread_count(1);
  const auto a = green_terms(d.ctx, h, w, g);
  set_thread_count(3);
  const auto b = green_terms(d.ctx, h, w, g);
  set_thread_count(0);
  EXPECT_EQ(a.bulk_hw, b.bulk_hw);
  EXPECT_EQ(a.boundary_wh, b.boundary_wh);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Quadrature, ParallelForRethrows) {
  set_thread_count(2);
  EXPECT_THROW(parallel_for(8, [](std::size_t i) {
                 if (i == 5) throw DomainError("boom");
               }),
               DomainError);
  set_thread_count(0);
}

TEST(ConvergenceFit, RecoversSlope) {
  const std::vector<int> levels{3, 4, 5};
  std::vector<double> res;
  for (int L : levels) res.push_back(3.0 * std::pow(2.0, -2.0 * (L - 1)));
  const auto fit = fit_convergence(levels, res);
  EXPECT_NEAR(fit.order, 2.0, 1e-12);
  EXPECT_EQ(fit.used, 3u);
  EXPECT_FALSE(fit.at_floor);
}

TEST(ConvergenceFit, FloorPointsAreDropped) {
  const std::vector<int> levels{3, 4, 5};
  const std::vector<double> res{1e-2, 1e-14, 1e-15};
  const auto fit = fit_convergence(levels, res);
  EXPECT_TRUE(fit.at_floor);
  EXPECT_TRUE(std::isnan(fit.order));
}

TEST(Domains, CatalogAndVolumes) {
  EXPECT_EQ(domain_names().size(), 6u);
  EXPECT_THROW(make_domain("klein-bottle"), DomainError);
  const Domain ball = make_domain("euclidean-ball");
  EXPECT_NEAR(volume(ball.ctx, make_grid(ball, 5)), 4.0 * std::numbers::pi / 3.0, 1e-12);
  const Domain ann = make_domain("euclidean-annulus");
  EXPECT_NEAR(volume(ann.ctx, make_grid(ann, 5)), 4.0 * std::numbers::pi / 3.0 * (1 - 0.125), 1e-12);
  const Domain hyp = make_domain("hyperbolic-ball");
  // 4 pi int_0^{1/2} (2/(1-r^2))^3 r^2 dr
  EXPECT_NEAR(volume(hyp.ctx, make_grid(hyp, 5)), 7.059849425508232, 1e-11);
}

TEST(Domains, DefaultDimensions) {
  EXPECT_EQ(make_domain("euclidean-ball").n, 3);
  EXPECT_EQ(make_domain("schwarzschild").n, 4);
  EXPECT_EQ(make_domain("euclidean-ball", 4).n, 4);
}

TEST(Green, AntisymmetryIsExact) {
  const Domain d = make_domain("euclidean-annulus");
  const auto g = make_grid(d, 3);
  const auto h = random_field(d, 7), w = random_field(d, 8);
  EXPECT_EQ(green_residual(d.ctx, h, w, g), -green_residual(d.ctx, w, h, g));
}

TEST(Green, ResidualDecreasesUnderRefinement) {
  const Domain d = make_domain("euclidean-annulus");
  const auto h = random_field(d, 7), w = random_field(d, 8);
  const double r3 = std::abs(green_residual(d.ctx, h, w, make_grid(d, 3)));
  const double r4 = std::abs(green_residual(d.ctx, h, w, make_grid(d, 4)));
  EXPECT_LT(r4, r3 / 16.0);
}

TEST(Green, VanishesForKernelPairs) {
  // P(h) = 0 in the interior and both boundary terms drop for a trivial kernel pair
  const Domain d = make_domain("euclidean-ball");
  const auto g = make_grid(d, 4);
  const auto t = green_terms(d.ctx, trivial_kernel(d, 1), trivial_kernel(d, 2), g);
  EXPECT_LT(std::abs(t.bulk_hw), 1e-8);
  EXPECT_LT(std::abs(t.boundary_hw), 1e-8);
}

TEST(Lbar, TrivialKernelAcrossDomains) {
  for (const char* name : {"euclidean-ball", "euclidean-annulus", "hyperbolic-ball"}) {
    const Domain d = make_domain(name);
    const auto g = make_grid(d, 4);
    const auto l = lbar_components(d.ctx, trivial_kernel(d, 3), 0.0, g);
    EXPECT_LT(l.kernel(), 1e-6) << name;
    EXPECT_LT(std::abs(l.volume), 1e-6) << name;
    EXPECT_LT(l.trace_sup, 1e-10) << name;
    EXPECT_GT(l.interior_nodes, 0u);
  }
}

TEST(Lbar, MetricDirectionWithShift) {
  // h = g solves the volume row with b = -1
  const Domain d = make_domain("euclidean-ball");
  const auto l = lbar_components(d.ctx, d.metric(), -1.0, make_grid(d, 3));
  EXPECT_NEAR(l.volume, 0.0, 1e-12);
  EXPECT_NEAR(l.volume_ref, 4.0 * std::numbers::pi / 3.0, 1e-4);
}

TEST(ZeroMean, HoldsOnKernelElements) {
  for (const char* name : {"hyperbolic-ball", "euclidean-ball"}) {
    const Domain d = make_domain(name);
    const auto z = zero_mean_residual(d.ctx, trivial_kernel(d, 5), make_grid(d, 4));
    EXPECT_LT(z.hypothesis, 1e-6);
    EXPECT_LT(z.residual, 1e-6) << name;
  }
}

TEST(HiddenBC, HoldsOnKernelAndReportsHypothesis) {
  const Domain d = make_domain("euclidean-ball");
  const auto g = make_grid(d, 3);
  const auto hb = hidden_bc_residuals(d.ctx, trivial_kernel(d, 5), 0.0, g);
  EXPECT_TRUE(hb.applicable);
  EXPECT_LT(hb.hb1, 1e-8);
  EXPECT_LT(hb.hb2, 1e-8);
  const auto off = hidden_bc_residuals(d.ctx, random_field(d, 5), 0.0, g);
  EXPECT_FALSE(off.applicable);
  EXPECT_GT(off.hypothesis, 1e-6);
}

TEST(ConformalKernel, NontrivialBoundaryTrace) {
  for (const char* name : {"euclidean-ball", "hyperbolic-ball"}) {
    const Domain d = make_domain(name);
    const auto g = make_grid(d, 4);
    const auto h = conformal_kernel(d, 9);
    const auto l = lbar_components(d.ctx, h, 0.0, g);
    EXPECT_LT(l.kernel(), 1e-6) << name;
    EXPECT_GT(l.trace_sup, 1e-3) << name;
    const auto cc = conformal_cauchy_residual(d.boundary(), h, g.faces.at(0).nodes);
    EXPECT_LT(cc.tangential, 1e-8);
    EXPECT_LT(cc.second_fundamental, 1e-8);
  }
  EXPECT_THROW(conformal_kernel(make_domain("euclidean-annulus"), 1), DomainError);
}

TEST(Divergence, BoundaryFluxMatchesOnBall) {
  const Domain d = make_domain("euclidean-ball");
  EXPECT_LT(std::abs(divergence_theorem_residual(d.ctx, random_vector_field(d, 4), make_grid(d, 5))), 1e-10);
}

TEST(Adjointness, BumpFields) {
  const Domain d = make_domain("euclidean-ball");
  const auto a = adjointness_residual(d.ctx, bump_field(d, 1), bump_field(d, 2), make_grid(d, 5));
  EXPECT_LT(std::abs(a.residual), 1e-10);
  EXPECT_GT(std::abs(a.lhs), 1e-6);
}

TEST(QuadraticFormTest, RoundSphereEigenvalues) {
  const Domain d = make_domain("euclidean-ball");
  const auto g = make_grid(d, 4);
  const auto q = nondegenerate_quadratic_form(d.boundary(), ScalarField::constant(2, 1.0), g.faces.at(0));
  EXPECT_NEAR(q.vv, 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(q.vLv, -2.0 * q.vv, 1e-10);
  EXPECT_NEAR(q.vH, 2.0 * q.vv, 1e-10);
}

TEST(Serialization, ReportsAreValidJson) {
  const Domain d = make_domain("euclidean-ball");
  const auto g = make_grid(d, 2);
  const auto j = nlohmann::json::parse(to_json(g));
  EXPECT_EQ(j.at("level"), 2);
  const auto hb = nlohmann::json::parse(to_json(hidden_bc_residuals(d.ctx, d.metric(), 0.0, g)));
  EXPECT_EQ(hb.at("status"), "hypothesis not met");
  const auto t = nlohmann::json::parse(to_json(green_terms(d.ctx, d.metric(), d.metric(), g)));
  EXPECT_TRUE(t.contains("residual"));
}
