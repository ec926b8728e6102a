#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "einlab/curvature.hpp"
#include "einlab/error.hpp"
#include "einlab/linearized.hpp"
#include "einlab/metrics.hpp"
#include "einlab/schwarzschild.hpp"

using namespace einlab;

TEST(Jet, SizesMatchBinomials) {
  EXPECT_EQ(jet_size(1, 3), 4);
  EXPECT_EQ(jet_size(3, 3), 20);
  EXPECT_EQ(jet_size(6, 3), kMaxJetCoeffs);
  EXPECT_EQ(jet_size(4, 0), 1);
}

TEST(Jet, ProductOfTranscendentals) {
  const double x0 = 0.3, y0 = -0.7;
  const Jet x = Jet::variable(2, 3, 0, x0);
  const Jet y = Jet::variable(2, 3, 1, y0);
  const Jet f = sin(x) * exp(y);
  EXPECT_NEAR(f.value(), std::sin(x0) * std::exp(y0), 1e-15);
  EXPECT_NEAR(f.d(0), std::cos(x0) * std::exp(y0), 1e-15);
  EXPECT_NEAR(f.d(0, 1), std::cos(x0) * std::exp(y0), 1e-15);
  EXPECT_NEAR(f.d(0, 0, 0), -std::cos(x0) * std::exp(y0), 1e-14);
  EXPECT_NEAR(f.d(0, 1, 1), std::cos(x0) * std::exp(y0), 1e-14);
}

TEST(Jet, QuotientAndPowers) {
  const double x0 = 0.4;
  const Jet x = Jet::variable(1, 3, 0, x0);
  const Jet q = 1.0 / (1.0 + x);
  EXPECT_NEAR(q.d(0), -1.0 / std::pow(1 + x0, 2), 1e-14);
  EXPECT_NEAR(q.d(0, 0, 0), -6.0 / std::pow(1 + x0, 4), 1e-13);
  const Jet r = sqrt(x) * sqrt(x);
  EXPECT_NEAR(r.d(0), 1.0, 1e-14);
  EXPECT_NEAR(r.d(0, 0), 0.0, 1e-13);
  const Jet p = pow(x, 2.5);
  EXPECT_NEAR(p.d(0, 0), 2.5 * 1.5 * std::pow(x0, 0.5), 1e-13);
  EXPECT_NEAR(log(exp(x)).d(0, 0, 0), 0.0, 1e-12);
}

TEST(Jet, MixedOrdersTruncate) {
  const Jet a = Jet::variable(2, 3, 0, 1.0);
  const Jet b = Jet::variable(2, 2, 1, 2.0);
  EXPECT_EQ((a * b).order(), 2);
  EXPECT_EQ(a.derivative(0).order(), 2);
  EXPECT_EQ((a * 3.0).order(), 3);
}

TEST(Jet, DropVariableFreezesSlice) {
  const Jet x = Jet::variable(2, 3, 0, 0.5);
  const Jet y = Jet::variable(2, 3, 1, 0.25);
  const Jet f = x * x * y + sin(y);
  const Jet s = f.drop_variable(0);
  EXPECT_EQ(s.nvar(), 1);
  EXPECT_NEAR(s.d(0), 0.25 + std::cos(0.25), 1e-15);
}

TEST(Tensor, InverseOfJetMatrix) {
  const std::vector<double> x0{0.2, -0.1};
  const auto xs = coordinate_jets(x0, 3);
  JTensor g(2, 2);
  g(0, 0) = 2.0 + xs[0] * xs[0];
  g(0, 1) = g(1, 0) = 0.3 * sin(xs[1]);
  g(1, 1) = 1.0 + exp(xs[0] * xs[1]);
  const JTensor gi = inverse_spd(g);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet s(0.0);
      for (int k = 0; k < 2; ++k) s += g(i, k) * gi(k, j);
      EXPECT_NEAR(s.value(), i == j ? 1.0 : 0.0, 1e-14);
      for (int c = 1; c < s.size(); ++c) EXPECT_NEAR(s.coeff(c), 0.0, 1e-13);
    }
  const Jet det = determinant_spd(g);
  EXPECT_NEAR(det.value(), g(0, 0).value() * g(1, 1).value() - std::pow(g(0, 1).value(), 2), 1e-14);
}

TEST(Tensor, IndefiniteMatrixIsRejected) {
  JTensor g(2, 2);
  g(0, 0) = Jet(1.0);
  g(1, 1) = Jet(-1.0);
  g(0, 1) = g(1, 0) = Jet(0.0);
  EXPECT_THROW(inverse_spd(g), DegenerateMetricError);
}

TEST(Curvature, PolarChristoffel) {
  const auto g = euclidean_spherical(3);
  const std::vector<double> x{1.5, 0.8, 0.3};
  const Tensor gam = christoffel(g, x);
  EXPECT_NEAR(gam(0, 1, 1), -1.5, 1e-14);
  EXPECT_NEAR(gam(1, 0, 1), 1.0 / 1.5, 1e-14);
  EXPECT_NEAR(gam(2, 1, 2), std::cos(0.8) / std::sin(0.8), 1e-13);
  EXPECT_LT(max_abs(riemann(g, x)), 1e-13);
}

class RoundSphere : public ::testing::TestWithParam<int> {};

TEST_P(RoundSphere, ConstantCurvature) {
  const int k = GetParam();
  const double radius = 2.0;
  const auto g = round_sphere(k, radius);
  std::vector<double> x(static_cast<std::size_t>(k), 0.7);
  x.back() = 1.1;
  EXPECT_NEAR(scalar_curv(g, x), k * (k - 1) / (radius * radius), 1e-12);
  const Tensor ric = ricci(g, x);
  const Tensor gv = g.values(x);
  for (std::size_t i = 0; i < ric.size(); ++i) EXPECT_NEAR(ric[i], (k - 1) / (radius * radius) * gv[i], 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Dims, RoundSphere, ::testing::Values(2, 3, 4, 5));

TEST(Curvature, HyperbolicBallIsEinstein) {
  for (int n : {3, 4}) {
    const auto g = hyperbolic_ball_spherical(n);
    std::vector<std::vector<double>> pts;
    for (double r : {0.1, 0.4, 0.7}) {
      std::vector<double> x(static_cast<std::size_t>(n), 1.0);
      x[0] = r;
      pts.push_back(x);
    }
    EXPECT_LT(einstein_residual(g, -1.0, pts), 1e-10) << "n = " << n;
  }
}

TEST(Curvature, MetricIsParallel) {
  const auto g = hyperbolic_ball_spherical(3);
  const std::vector<double> x{0.3, 1.0, 2.0};
  const auto geo = local_geometry(g, x, 3);
  const JTensor dg = covariant_derivative(geo.g, geo);
  for (std::size_t i = 0; i < dg.size(); ++i) EXPECT_NEAR(dg[i].value(), 0.0, 1e-13);
}

TEST(Field, FiniteDifferenceBackendMatchesAnalytic) {
  const auto exact = ScalarField::analytic(2, [](std::span<const Jet> x) { return sin(x[0]) * exp(0.5 * x[1]); });
  const auto fd = Field::finite_difference(
      2, 1, [](std::span<const double> x, std::span<double> out) { out[0] = std::sin(x[0]) * std::exp(0.5 * x[1]); });
  const std::vector<double> x{0.4, 0.2};
  const Jet a = exact.jet(x, 2);
  const Jet b = fd.evaluate(x, 2)[0];
  for (int c = 0; c < a.size(); ++c) EXPECT_NEAR(a.coeff(c), b.coeff(c), 1e-6);
}

TEST(Field, OrderBeyondCapabilityThrows) {
  Rng rng(1);
  const auto h = scaled(ScalarField::constant(3, 1.0), random_sym_tensor(3, rng));
  EXPECT_EQ(h.max_order(), kMaxJetOrder);
  const auto x = pullback(spherical_map(3), random_vector(3, rng));
  const auto lx = lie_derivative(x, euclidean_spherical(3));
  EXPECT_EQ(lx.max_order(), kMaxJetOrder - 1);
  const std::vector<double> p{0.5, 1.0, 1.0};
  EXPECT_THROW((void)lx.jets(p, kMaxJetOrder), CapabilityError);
  EXPECT_NO_THROW((void)lx.jets(p, kMaxJetOrder - 1));
}

TEST(Field, ChartContainment) {
  const Chart c = ball_chart(3, 1.0);
  const std::vector<double> inside{0.5, 1.0, 1.0}, outside{1.5, 1.0, 1.0};
  EXPECT_TRUE(c.contains(inside));
  EXPECT_FALSE(c.contains(outside));
}

TEST(FiniteDifference, RichardsonIsExactOnCubics) {
  const auto d = fd_directional([](double s) { return std::vector<double>{1.0 + 2.0 * s + 3.0 * s * s + s * s * s}; });
  EXPECT_NEAR(d.value[0], 2.0, 1e-12);
}

TEST(Rng, SeededStreamsAreReproducible) {
  Rng a(42), b(42), c(43);
  const double va = a.uniform();
  EXPECT_EQ(va, b.uniform());
  EXPECT_NE(va, c.uniform());
  EXPECT_GE(va, -1.0);
  EXPECT_LT(va, 1.0);
}

namespace {

std::vector<double> sample(Rng& rng, int n, double lo, double hi) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = rng.uniform(lo, hi);
  return x;
}

// generic positive definite metric with no symmetries
MetricField lumpy_metric(int n) {
  return MetricField(SymTensorField::analytic(n, [n](std::span<const Jet> x, JTensor& g) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
        g(i, j) = 0.15 * sin(x[a] + 2.0 * x[b] + 0.3 * (i + j)) * cos(x[(a + 1) % x.size()]);
        if (i == j) g(i, j) += 2.0 + 0.3 * x[a] * x[a];
      }
  }));
}

}  // namespace

TEST(Curvature, RiemannSymmetriesAndBianchi) {
  Rng rng(11);
  for (int n : {3, 4, 5}) {
    const auto g = lumpy_metric(n);
    for (int t = 0; t < 5; ++t) {
      const auto x = sample(rng, n, -0.5, 0.5);
      const Tensor r = riemann(g, x);
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              worst = std::max(worst, std::abs(r(a, b, c, d) + r(b, a, c, d)));
              worst = std::max(worst, std::abs(r(a, b, c, d) + r(a, b, d, c)));
              worst = std::max(worst, std::abs(r(a, b, c, d) - r(c, d, a, b)));
              worst = std::max(worst, std::abs(r(a, b, c, d) + r(b, c, a, d) + r(c, a, b, d)));
            }
      EXPECT_LT(worst, 1e-9) << "n = " << n;
    }
  }
}

TEST(Field, MixedPartialsCommute) {
  const auto f = ScalarField::analytic(3, [](std::span<const Jet> x) { return exp(x[0] * x[1]) * sin(x[2] + x[0]); });
  const auto fd = ScalarField(f.field().as_finite_difference());
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto x = sample(rng, 3, -1.0, 1.0);
    const Jet a = f.jet(x, 3), b = fd.jet(x, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        EXPECT_NEAR(a.d(i, j), a.d(j, i), 1e-12);
        EXPECT_NEAR(b.d(i, j), b.d(j, i), 1e-8);
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(a.d(i, j, k), a.d(k, i, j), 1e-12);
      }
  }
}

TEST(Curvature, BuiltInEinsteinMetrics) {
  std::vector<std::vector<double>> sph;
  for (double r : {0.2, 0.5, 0.8}) sph.push_back({r, 0.9, 1.3, 0.4});
  EXPECT_LT(einstein_residual(hyperbolic_ball_cartesian(3), -1.0,
                              std::vector<std::vector<double>>{{0.1, 0.2, -0.3}, {0.5, -0.4, 0.1}}),
            1e-9);
  EXPECT_LT(einstein_residual(euclidean_spherical(4), 0.0, sph), 1e-9);
  for (double lambda : {-0.5, 0.0, 0.05}) {
    const auto p = make_params(5, lambda, 2.0);
    const auto rd = roots(p);
    std::vector<std::vector<double>> pts;
    for (double f : {1.1, 1.5, 2.0}) pts.push_back({0.7, std::min(f * rd.r0, 0.5 * (rd.r0 + rd.r1)), 0.8, 1.2, 2.0});
    EXPECT_LT(einstein_residual(schwarzschild_metric(p, rd), lambda, pts), 1e-9) << lambda;
  }
}

TEST(Curvature, DesingularizedChartOnGrid) {
  const auto d = desing(make_params(5, 0.0, 2.0));
  const auto g = desingularized_metric(d);
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      for (int k = 0; k < 20; ++k) pts.push_back({-1.0 + i / 9.5, -1.0 + j / 9.5, 0.3 + 2.5 * k / 19.0, 1.0, 2.0});
  EXPECT_LT(einstein_residual(g, 0.0, pts), 1e-9);
}

TEST(FiniteDifference, ScalarCurvatureOfFlatFamily) {
  const auto g = euclidean_metric(3);
  const std::vector<double> x{0.1, 0.2, 0.3};
  const auto d = fd_directional([&](double s) {
    return std::vector<double>{scalar_curv(MetricField(g + s * g), x)};
  });
  EXPECT_NEAR(d.value[0], 0.0, 1e-10);
}
