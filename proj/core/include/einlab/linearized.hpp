#pragma once

#include <span>
#include <vector>

#include "einlab/curvature.hpp"
#include "einlab/field.hpp"

namespace einlab {

/// Einstein background (g, Lambda) on a chart. Construction checks
/// |Ric - (n-1) Lambda g| < tolerance on the working points.
class LinearizedContext {
 public:
  LinearizedContext(MetricField background, Chart chart, std::vector<std::vector<double>> points = {},
                    double tolerance = 1e-8);

  const MetricField& background() const { return g_; }
  const Chart& chart() const { return chart_; }
  double lambda() const { return lambda_; }
  int dim() const { return chart_.dim; }
  double background_residual() const { return residual_; }
  const std::vector<std::vector<double>>& points() const { return points_; }

 private:
  MetricField g_;
  Chart chart_;
  double lambda_ = 0.0;
  double residual_ = 0.0;
  std::vector<std::vector<double>> points_;
};

/// Deterministic interior sample of a chart box (corners of the middle half
/// of the box plus its center).
std::vector<std::vector<double>> interior_points(const Chart& chart);

// Jet-level kernels. Orders: h of order K gives Ric' of order K - 2,
// bianchi and killing lose one order.

JTensor lin_ricci_jets(const LocalGeometry& geo, const JTensor& h);
Jet lin_scalar_jets(const LocalGeometry& geo, const JTensor& h, const JTensor& ric_prime);
JTensor bianchi_jets(const LocalGeometry& geo, const JTensor& h);
/// Killing operator (1/2) L_X g for a vector with upper-index components.
JTensor killing_jets(const LocalGeometry& geo, const JTensor& x_upper);
/// Divergence (Div t)_j = g^{ik} t_{ij;k} of a covariant 2-tensor.
JTensor divergence_jets(const LocalGeometry& geo, const JTensor& t);
/// Rough Laplacian of a covariant tensor of rank 1 or 2 (trace of the Hessian).
JTensor laplacian_jets(const LocalGeometry& geo, const JTensor& t);
/// (R o h)_ij = R_{iklj} h^{kl}.
JTensor curvature_action_jets(const LocalGeometry& geo, const JTensor& h);
/// (Ric')^*(gamma), via -1/2 Delta gamma + beta^* Div gamma - R o gamma + (n-1) Lambda gamma.
JTensor lin_einstein_adjoint_jets(const LocalGeometry& geo, double lambda, const JTensor& gamma);

// Pointwise evaluators.

Tensor lin_ricci(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);
double lin_scalar(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);
Tensor bianchi(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);
Tensor killing(const LinearizedContext& ctx, const VectorField& x_field, std::span<const double> x);
Tensor operator_K(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);
Tensor operator_P(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);

struct PCheck {
  Tensor P;           // -Ric'(h) + R'(h) g / 2 + (n-1) Lambda h
  Tensor recombined;  // -K(h) + tr K(h) g / 2
  double discrepancy = 0.0;
};
PCheck operator_P_checked(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);

Tensor lin_einstein_adjoint(const LinearizedContext& ctx, const SymTensorField& gamma, std::span<const double> x);

/// sup over points of |Div((Ric')^*(gamma) - (n-1) Lambda gamma)|_g.
double adjoint_divergence_residual(const LinearizedContext& ctx, const SymTensorField& gamma,
                                   std::span<const std::vector<double>> points);

/// One-form beta(D X) + (Delta X + Ric(X, .)) / 2 at x; vanishes identically.
Tensor laplace0_residual(const LinearizedContext& ctx, const VectorField& x_field, std::span<const double> x);

/// L_X g as a tensor field (one derivative order is consumed).
SymTensorField lie_derivative(const VectorField& x_field, const MetricField& g);

struct DilationResiduals {
  double ricci = 0.0;      // Ric'_{g(t)}(h) - (1-t)^{-2} Ric'(h)
  double traceless = 0.0;  // traceless boundary parts under g(t) and g
  double mean_curv = 0.0;  // H'_{g(t)}(h) - (1-t)^{-3} H'(h)
};

/// Scaling identities for g(t) = (1 - t)^2 g on the context's first face.
/// Residuals are max-abs over the context points and the given boundary
/// points (chart coordinates on the face).
DilationResiduals dilation_scaling_check(const LinearizedContext& ctx, const SymTensorField& h, double t,
                                         std::span<const std::vector<double>> boundary_points);

}  // namespace einlab
