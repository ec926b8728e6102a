#pragma once

#include <algorithm>
#include <span>

#include "einlab/boundary.hpp"
#include "einlab/linearized.hpp"

namespace einlab {

/// Analytic value against a finite-difference derivative along g + s h.
struct OracleError {
  double max_abs = 0.0;
  double scale = 0.0;  // max |fd value|
  /// |a - b| / max(1, |b|): relative for large values, absolute near zero.
  double mixed() const { return max_abs / std::max(1.0, scale); }
};

OracleError lin_ricci_vs_fd(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> x);

struct BoundaryOracle {
  OracleError A_prime;
  OracleError H_prime;
  OracleError nu_prime;
};

BoundaryOracle lin_boundary_vs_fd(const Hypersurface& s, const SymTensorField& h, std::span<const double> u);

/// tr A'(h) - H'(h) - A . h^T at a surface point.
double trace_identity_residual(const Hypersurface& s, const SymTensorField& h, std::span<const double> u);

}  // namespace einlab
