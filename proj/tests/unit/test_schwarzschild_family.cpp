#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "einlab/curvature.hpp"
#include "einlab/error.hpp"
#include "einlab/schwarzschild.hpp"

using namespace einlab;

TEST(Params, ClosedFormsForFourDimensionalSchwarzschild) {
  const auto p = make_params(4, 0.0, 1.0);
  const auto rd = roots(p);
  EXPECT_NEAR(rd.r0, 2.0, 1e-12);
  EXPECT_NEAR(rd.ell, 2.0, 1e-12);
  EXPECT_TRUE(std::isinf(rd.r1));
  EXPECT_NEAR(*s_crit(p), std::cbrt(16.0), 1e-12);
  EXPECT_NEAR(p_of_s(p, *s_crit(p)), 3 * std::pow(16.0, 2.0 / 3.0) - 16, 1e-10);
  EXPECT_NEAR(p_of_s(p, 2.0), 4.0, 1e-12);
}

TEST(Params, DeSitterAdmissibility) {
  EXPECT_NEAR(make_params(4, 0.0, 1.0).lambda_bound(), 1.0 / 27.0, 1e-16);
  EXPECT_NO_THROW(make_params(4, 0.0369, 1.0));
  EXPECT_NO_THROW(make_params(4, 0.037, 1.0));  // 0.037 < 1/27
  EXPECT_THROW(make_params(4, 0.0371, 1.0), ParameterError);
  EXPECT_THROW(make_params(4, 1.0 / 27.0, 1.0), ParameterError);
  // n = 5: m^2 Lambda^2 < 4 / 256
  EXPECT_NO_THROW(make_params(5, 0.12, 1.0));
  EXPECT_THROW(make_params(5, 0.13, 1.0), ParameterError);
  EXPECT_THROW(make_params(4, 0.0, -1.0), ParameterError);
  EXPECT_THROW(make_params(3, 0.0, 1.0), UnsupportedDimensionError);
}

TEST(Roots, AreZerosOfF) {
  for (int n : {4, 5, 6}) {
    for (double lambda : {-2.0, -0.1, 0.0, 0.005, 0.02}) {
      SchwarzschildParams p{n, lambda, 0.7};
      if (!p.valid()) continue;
      const auto rd = roots(p);
      EXPECT_NEAR(f_of_r(p, rd.r0), 0.0, 1e-12);
      EXPECT_NEAR(rd.ell, 1.0 / f_prime(p, rd.r0), 1e-12);
      if (lambda > 0) {
        EXPECT_NEAR(f_of_r(p, rd.r1), 0.0, 1e-12);
        EXPECT_GT(rd.r1, rd.r0);
        ASSERT_TRUE(rd.ell_hat.has_value());
      }
    }
  }
}

TEST(Spectrum, SecondEigenvalueTracksP) {
  for (int n : {4, 5}) {
    for (double lambda : {-1.0, -0.05, 0.0, 0.01}) {
      const auto p = make_params(n, lambda, 1.0);
      const auto rd = roots(p);
      const double hi = std::isinf(rd.r1) ? 6 * rd.r0 : rd.r1;
      for (int i = 1; i < 40; ++i) {
        const double s = rd.r0 + (hi - rd.r0) * i / 40.0;
        const auto rep = nondegenerate(p, s);
        const double pv = p_of_s(p, s);
        if (std::abs(pv) > 1e-10) EXPECT_EQ(rep.second_eigenvalue > 0, pv > 0) << n << ' ' << lambda << ' ' << s;
      }
    }
  }
}

TEST(Spectrum, SortedAndContainsConstantMode) {
  const auto p = make_params(4, 0.0, 1.0);
  const auto sp = spectrum(p, 3.0);
  for (std::size_t i = 1; i < sp.size(); ++i) EXPECT_LE(sp[i - 1].eigenvalue, sp[i].eigenvalue);
  EXPECT_EQ(sp.front().i, 0);
  EXPECT_EQ(sp.front().k, 0);
  EXPECT_NEAR(sp.front().eigenvalue, -1.0 / 9.0, 1e-15);
  EXPECT_THROW(spectrum(p, 1.0), DomainError);
}

TEST(PositivityOfP, NearR0AndLargeS) {
  for (int n : {4, 5, 6}) {
    const auto p = make_params(n, 0.0, 1.0);
    const auto rep = classify_range(p, {});
    EXPECT_TRUE(rep.near_r0_positive);
    ASSERT_TRUE(rep.large_s_positive.has_value());
    EXPECT_TRUE(*rep.large_s_positive);
    EXPECT_GT(p_of_s(p, 1e4 * rep.r0), 0.0);
  }
}

TEST(PositivityOfP, AdSThresholdBothSides) {
  const auto p = make_params(4, -0.3, 1.0);
  const double k = 1.0;
  const double ell_below = 0.9 / std::sqrt(4 * k * 0.3);  // Lambda > -1/(4(n-3) ell^2)
  const double ell_above = 1.1 / std::sqrt(4 * k * 0.3);
  const auto a = classify_range(p, {}, ell_below);
  const auto b = classify_range(p, {}, ell_above);
  EXPECT_TRUE(*a.large_s_positive);
  EXPECT_FALSE(*b.large_s_positive);
  EXPECT_GT(p_of_s_with_period(p, ell_below, 1e5), 0.0);
  EXPECT_LT(p_of_s_with_period(p, ell_above, 1e5), 0.0);
}

TEST(PositivityOfP, DeSitterBothRoots) {
  for (double lambda : {0.001, 0.01, 0.03}) {
    const auto rep = classify_range(make_params(4, lambda, 1.0), {});
    EXPECT_TRUE(rep.near_r0_positive);
    ASSERT_TRUE(rep.near_r1_positive.has_value());
    EXPECT_TRUE(*rep.near_r1_positive);
  }
}

TEST(PositivityOfP, GlobalPositivityInFourDimensions) {
  const auto p = make_params(4, 0.0, 1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(2.0 + 0.05 * i);
  const auto rep = classify_range(p, grid);
  EXPECT_TRUE(rep.global_positive);
  EXPECT_GT(rep.grid_min_p, 3.0);
}

TEST(Desing, OdeAndSmoothness) {
  for (double lambda : {-0.5, 0.0, 0.02}) {
    const auto p = make_params(4, lambda, 1.0);
    const auto d = desing(p);
    const auto& rd = d.root_data();
    EXPECT_NEAR(d.exponent(), 1.0, 1e-12);
    const double hi = std::isinf(rd.r1) ? 5 * rd.r0 : rd.r1;
    for (int i = 1; i < 10; ++i) {
      const double r = rd.r0 + (hi - rd.r0) * i / 10.0;
      EXPECT_NEAR(rd.ell * d.Fprime(r) / d.F(r), 1.0 / f_of_r(p, r), 1e-9 * (1.0 + 1.0 / f_of_r(p, r)));
      EXPECT_NEAR(d.r_of_F(d.F(r)), r, 1e-10);
    }
    const auto g = desingularized_metric(d);
    std::vector<std::vector<double>> pts;
    for (double eps : {1e-2, 1e-4, 1e-6}) pts.push_back({std::sqrt(d.F(rd.r0 + eps * rd.r0)), 0.0, 1.0, 0.5});
    pts.push_back({0.0, 0.0, 1.0, 0.5});
    EXPECT_LT(einstein_residual(g, lambda, pts), 1e-6);
    EXPECT_LT(desingularization_mismatch(d, 0.7, 1.5 * rd.r0 < hi ? 1.5 * rd.r0 : 0.5 * (rd.r0 + hi), {1.0, 0.5}),
              1e-10);
  }
}

TEST(Desing, ConicalDefectForPositiveLambda) {
  EXPECT_EQ(conical_defect(make_params(4, 0.0, 1.0)), 0.0);
  for (double lambda : {0.001, 0.02, 0.036}) EXPECT_GT(conical_defect(make_params(4, lambda, 1.0)), 0.0);
}

TEST(Sweep, RowsAndClasses) {
  const auto p = make_params(4, 0.0, 1.0);
  const auto row = sweep_point(p, 2.0);
  EXPECT_EQ(row.cls, BoundaryClass::nondegenerate);
  EXPECT_NEAR(row.p, 4.0, 1e-12);
  EXPECT_EQ(to_string(BoundaryClass::boundary_case), "boundary-case");
  EXPECT_THROW(sweep_point(p, 1.9), DomainError);
}
