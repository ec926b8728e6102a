#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "einlab/field.hpp"

namespace einlab {

/// Chart coordinates x -> Cartesian coordinates y with analytic Jacobian.
struct CoordinateMap {
  int dim = 0;
  /// Fills y (dim entries) and jac(i, a) = d y^a / d x^i.
  std::function<void(std::span<const Jet> x, std::span<Jet> y, JTensor& jac)> eval;
};

/// (r, theta_1 .. theta_{n-2}, phi) -> R^n. For n = 3 this is the usual
/// (r sin t cos p, r sin t sin p, r cos t).
CoordinateMap spherical_map(int n);

/// Unit sphere S^k embedded in R^{k+1}: angles (theta_1 .. theta_{k-1}, phi).
void sphere_embedding(std::span<const Jet> angles, std::span<Jet> u, JTensor* du = nullptr);

/// Round metric of S^k in the angles above, written into out(offset+i, offset+i).
void fill_round_sphere(std::span<const Jet> angles, const Jet& radius_sq, JTensor& out, int offset);

ScalarField pullback(const CoordinateMap& map, const ScalarField& cartesian);
SymTensorField pullback(const CoordinateMap& map, const SymTensorField& cartesian);
/// Chart components of a vector field given by Cartesian components.
VectorField pullback(const CoordinateMap& map, const VectorField& cartesian);

MetricField euclidean_metric(int n);
MetricField euclidean_spherical(int n);
MetricField round_sphere(int k, double radius = 1.0);
/// Poincare ball (Lambda = -1): (2 / (1 - |y|^2))^2 |dy|^2 in spherical chart.
MetricField hyperbolic_ball_spherical(int n);
MetricField hyperbolic_ball_cartesian(int n);
/// 4 ell^2 f_s d theta^2 + s^2 g_{S^{n-2}} on S^1 x S^{n-2}, dimension n - 1.
MetricField product_boundary_metric(int n, double ell, double f_s, double s);

/// Spherical chart of the ball of radius R (one face r = R).
Chart ball_chart(int n, double radius);
/// Spherical chart of the annulus a <= r <= b (faces r = a inward, r = b).
Chart annulus_chart(int n, double a, double b);

/// Portable seeded generator for test fields: mt19937_64 with the top 53
/// bits mapped to [-1, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return 2.0 * static_cast<double>(eng_() >> 11) * 0x1.0p-53 - 1.0; }
  double uniform(double lo, double hi) { return lo + 0.5 * (uniform() + 1.0) * (hi - lo); }

 private:
  std::mt19937_64 eng_;
};

/// Polynomial of degree <= 2 in n variables with coefficients in [-1, 1].
struct QuadraticPoly {
  int n = 0;
  std::vector<double> coeffs;  // 1, y_i, y_i y_j (i <= j)

  static QuadraticPoly random(int n, Rng& rng);
  Jet operator()(std::span<const Jet> y) const;
};

/// Cartesian random fields, componentwise QuadraticPoly.
ScalarField random_scalar(int n, Rng& rng);
VectorField random_vector(int n, Rng& rng);
SymTensorField random_sym_tensor(int n, Rng& rng);

}  // namespace einlab
