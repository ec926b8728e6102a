#pragma once

#include <functional>
#include <span>
#include <vector>

#include "einlab/field.hpp"
#include "einlab/tensor.hpp"

namespace einlab {

/// Metric, inverse, connection and curvature at one point, as jets.
///
/// Built from metric jets of order K: g and ginv carry order K, christoffel
/// K - 1, curvature K - 2. Curvature is left empty when K < 2.
///
/// Conventions: christoffel(k, i, j) = Gamma^k_ij. riemann(a, b, c, d) =
/// <R(d_a, d_b) d_c, d_d> with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y],
/// so ricci(b, c) = g^{ad} riemann(a, b, c, d) and the round sphere has
/// riemann(a, b, b, a) > 0.
struct LocalGeometry {
  int n = 0;
  JTensor g;
  JTensor ginv;
  JTensor christoffel;
  JTensor riemann;
  JTensor ricci;
  Jet scalar;

  bool has_curvature() const { return !riemann.empty(); }
};

LocalGeometry local_geometry(const JTensor& g_jets);
LocalGeometry local_geometry(const MetricField& g, std::span<const double> x, int order = 2);

Tensor christoffel(const MetricField& g, std::span<const double> x);
Tensor riemann(const MetricField& g, std::span<const double> x);
Tensor ricci(const MetricField& g, std::span<const double> x);
double scalar_curv(const MetricField& g, std::span<const double> x);

/// sup over points of max_ij |Ric_ij - (n-1) Lambda g_ij|.
double einstein_residual(const MetricField& g, double lambda, std::span<const std::vector<double>> points);

/// Covariant derivative of a fully covariant jet tensor; the new derivative
/// index is appended last. Output order is one less than the input.
JTensor covariant_derivative(const JTensor& t, const LocalGeometry& geo);

/// Trace of a covariant 2-tensor, g^{ij} t_ij.
Jet trace(const JTensor& t, const JTensor& ginv);

/// Index raising/lowering for rank-1 tensors.
JTensor raise(const JTensor& v, const JTensor& ginv);
JTensor lower(const JTensor& v, const JTensor& g);

/// g-inner product of two covariant 2-tensors, g^{ik} g^{jl} a_ij b_kl.
Jet inner(const JTensor& a, const JTensor& b, const JTensor& ginv);

/// Pointwise g-norm of a covariant 1- or 2-tensor of values.
double norm(const Tensor& t, const Tensor& ginv);

struct DirectionalDerivative {
  std::vector<double> value;
  std::vector<double> error_estimate;
};

/// d/ds at s = 0 of quantity(s) by central differences with Richardson
/// extrapolation over steps h, h/2, h/4.
DirectionalDerivative fd_directional(const std::function<std::vector<double>(double)>& quantity, double h = 1e-2);

/// Convenience: quantity evaluated on the metric family g + s h.
DirectionalDerivative fd_directional(const MetricField& g, const SymTensorField& h,
                                     const std::function<std::vector<double>(const MetricField&)>& quantity,
                                     double step = 1e-2);

/// Flattened values of a tensor, for use with fd_directional.
std::vector<double> flatten(const Tensor& t);

}  // namespace einlab
