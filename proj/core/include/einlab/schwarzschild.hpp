#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "einlab/field.hpp"

namespace einlab {

/// Euclidean (anti-/de Sitter) Schwarzschild data, f(r) = 1 - 2m r^{3-n} - Lambda r^2.
struct SchwarzschildParams {
  int n = 4;
  double lambda = 0.0;
  double m = 1.0;

  /// Throws ParameterError (or UnsupportedDimensionError for n < 4) when
  /// the parameters do not describe a valid family member.
  void validate() const;
  /// (n-3)^{n-3} / (n-1)^{n-1}, the bound on m^2 Lambda^{n-3} for Lambda > 0.
  double lambda_bound() const;
  bool valid() const;
};

SchwarzschildParams make_params(int n, double lambda, double m);

double f_of_r(const SchwarzschildParams& p, double r);
double f_prime(const SchwarzschildParams& p, double r);

struct RootData {
  double r0 = 0.0;
  double r1 = 0.0;  // +inf unless Lambda > 0
  double ell = 0.0;
  std::optional<double> ell_hat;
  std::optional<double> rstar;
};

RootData roots(const SchwarzschildParams& p);

/// g = f dt^2 + dr^2 / f + r^2 g_{S^{n-2}} in (t, r, angles).
MetricField schwarzschild_metric(const SchwarzschildParams& p, const RootData& rd);
/// Omega_s: t in [0, 4 pi ell) periodic, r in [r0, s], face r = s.
Chart schwarzschild_chart(const SchwarzschildParams& p, const RootData& rd, double s);

/// p(s) = s^2 - 4(n-3) ell^2 f(s); s must lie in [r0, r1).
double p_of_s(const SchwarzschildParams& p, double s);
/// Same polynomial with an arbitrary period constant instead of the
/// one fixed by r0; used to probe both sides of the large-s threshold.
double p_of_s_with_period(const SchwarzschildParams& p, double ell, double s);
/// Unique critical point of p when 1 + 4(n-3) ell^2 Lambda > 0.
std::optional<double> s_crit(const SchwarzschildParams& p);
std::optional<double> s_crit_with_period(const SchwarzschildParams& p, double ell);

struct RangeReport {
  double r0 = 0.0;
  double r1 = 0.0;
  double ell = 0.0;
  double leading = 0.0;          // 1 + 4(n-3) ell^2 Lambda
  double threshold = 0.0;        // -1 / (4(n-3) ell^2)
  bool near_r0_positive = false;
  std::optional<bool> large_s_positive;   // Lambda <= 0
  std::optional<bool> near_r1_positive;   // Lambda > 0
  bool global_positive = false;
  std::optional<double> s_c;
  double grid_min_p = 0.0;
  double grid_argmin = 0.0;
  std::vector<double> s_grid;
  std::vector<double> p_values;
};

/// Positivity analysis of p on [r0, r1). When ell is given it replaces the
/// period constant fixed by r0.
RangeReport classify_range(const SchwarzschildParams& p, const std::vector<double>& s_grid,
                           std::optional<double> ell = std::nullopt);

struct SpectrumEntry {
  int i = 0;  // circle mode
  int k = 0;  // sphere degree
  double eigenvalue = 0.0;
};

/// Eigenvalues of L_Sigma on Sigma_s, ordered by value then (i, k).
std::vector<SpectrumEntry> spectrum(const SchwarzschildParams& p, double s, int i_max = 8, int k_max = 8);
double mode_eigenvalue(const SchwarzschildParams& p, const RootData& rd, double s, int i, int k);

enum class BoundaryClass { nondegenerate, degenerate, boundary_case };
std::string to_string(BoundaryClass c);

struct NondegeneracyReport {
  BoundaryClass cls = BoundaryClass::boundary_case;
  double p = 0.0;
  double second_eigenvalue = 0.0;
  int second_i = 0;
  int second_k = 0;
  double first_eigenvalue = 0.0;
};

/// Classifies Sigma_s by the second eigenvalue of L_Sigma and checks the
/// sign against p(s); throws ConsistencyError on disagreement.
NondegeneracyReport nondegenerate(const SchwarzschildParams& p, double s, double band = 1e-10);

/// (n-2) sqrt(f)/s + f'/(2 sqrt f), the mean curvature of Sigma_s.
double sigma_mean_curvature(const SchwarzschildParams& p, double s);
/// (n-3)(n-2)/s^2.
double sigma_scalar_curvature(const SchwarzschildParams& p, double s);

/// F(r) = (r - r0) e^{b1(r)} with ell F'/F = 1/f on [r0, r1).
class DesingFunction {
 public:
  explicit DesingFunction(const SchwarzschildParams& p);

  const SchwarzschildParams& params() const { return p_; }
  const RootData& root_data() const { return rd_; }
  double exponent() const { return a_; }  // r0^{n-3} / (ell P(r0)), equals 1

  /// r^{n-3} f(r) / (r - r0) by deflation.
  double deflated(double r) const;
  double deflated_at_r0() const { return p_r0_; }
  /// 1/f - ell/(r - r0), smooth at r0.
  double b0(double r) const;
  double b1(double r) const;
  double F(double r) const;
  double Fprime(double r) const;
  /// F, F', F''/2, F'''/6 at r.
  std::array<double, 4> F_taylor(double r) const;
  /// Inverse of F on [0, F(r1)).
  double r_of_F(double u) const;

 private:
  Jet b0_jet(const Jet& r) const;

  SchwarzschildParams p_;
  RootData rd_;
  std::vector<double> deflated_;  // coefficients of P, ascending
  std::vector<double> numer_;     // Q with N(r) = (r - r0) Q(r), ascending
  double p_r0_ = 0.0;
  double a_ = 1.0;
};

DesingFunction desing(const SchwarzschildParams& p);

/// (4 ell / F'(r)) (dx^2 + dy^2) + r^2 g_{S^{n-2}} with F(r) = x^2 + y^2, in
/// (x, y, angles). Derivatives up to order 2.
MetricField desingularized_metric(const DesingFunction& d);

/// max |pullback of the desingularized metric - original| at (t, r, angles).
double desingularization_mismatch(const DesingFunction& d, double t, double r, const std::vector<double>& angles);

/// |ell - ell_hat| for Lambda > 0, 0 otherwise.
double conical_defect(const SchwarzschildParams& p);

struct SweepRow {
  int n = 0;
  double lambda = 0.0;
  double m = 0.0;
  double s = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  double ell = 0.0;
  double p = 0.0;
  double lambda_min = 0.0;
  BoundaryClass cls = BoundaryClass::boundary_case;
};

SweepRow sweep_point(const SchwarzschildParams& p, double s, double band = 1e-10);

}  // namespace einlab
