#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "einlab/boundary.hpp"
#include "einlab/linearized.hpp"
#include "einlab/metrics.hpp"
#include "einlab/quadrature.hpp"
#include "einlab/schwarzschild.hpp"

namespace einlab {

enum class DomainKind { ball, annulus, schwarzschild };

/// A named test domain: Einstein background, chart with faces, and what
/// the field generators need to know about its shape.
struct Domain {
  std::string name;
  DomainKind kind = DomainKind::ball;
  int n = 3;
  LinearizedContext ctx;
  double outer = 1.0;  // ball / annulus radius in chart units
  double inner = 0.0;  // annulus only
  std::optional<SchwarzschildParams> params;
  std::optional<RootData> root_data;
  double s = 0.0;  // Schwarzschild boundary radius

  const Chart& chart() const { return ctx.chart(); }
  const MetricField& metric() const { return ctx.background(); }
  Hypersurface boundary(int face = 0) const { return hypersurface_data(metric(), chart(), face); }
};

/// euclidean-ball, euclidean-annulus, hyperbolic-ball, schwarzschild,
/// ads-schwarzschild, ds-schwarzschild.
const std::vector<std::string>& domain_names();
/// n = 0 picks the default dimension (3 for the ball family, 4 otherwise).
/// Throws DomainError for unknown names.
Domain make_domain(const std::string& name, int n = 0);

DomainGrid make_grid(const Domain& d, int level);

// ------------------------------------------------------------- generators

/// Seeded smooth symmetric tensor, not in any kernel.
SymTensorField random_field(const Domain& d, std::uint64_t seed);
/// Seeded smooth vector field (no boundary condition).
VectorField random_vector_field(const Domain& d, std::uint64_t seed);
/// Seeded vector field vanishing on every face.
VectorField trivial_kernel_vector(const Domain& d, std::uint64_t seed);
/// L_X g for X from trivial_kernel_vector.
SymTensorField trivial_kernel(const Domain& d, std::uint64_t seed);
/// Extension c - (c.y) y / R^2 of a conformal Killing field of the boundary
/// sphere; ball domains only.
VectorField conformal_vector(const Domain& d, std::span<const double> c);
/// L_X g for the field above with a seeded c.
SymTensorField conformal_kernel(const Domain& d, std::uint64_t seed);
/// Random tensor written directly in chart coordinates, with nonzero third
/// derivatives. Not regular at the horizon axis of the Schwarzschild charts,
/// so only for pointwise checks at interior points.
SymTensorField random_chart_field(const Domain& d, std::uint64_t seed);
/// Random field times a bump vanishing to third order on every face.
SymTensorField bump_field(const Domain& d, std::uint64_t seed);

// ------------------------------------------------------------- identities

/// Both sides of the Green-type identity, as four separately summed terms.
struct GreenTerms {
  double bulk_hw = 0.0;      // int <P(h), w> dv
  double bulk_wh = 0.0;      // int <P(w), h> dv
  double boundary_hw = 0.0;  // int <Q(h), B(w)> d sigma
  double boundary_wh = 0.0;
  /// (bulk_hw - boundary_hw) - (bulk_wh - boundary_wh); changes sign
  /// exactly when h and w are swapped.
  double residual = 0.0;
};

GreenTerms green_terms(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& w,
                       const DomainGrid& grid);
double green_residual(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& w,
                      const DomainGrid& grid);

/// Rows of the modified operator with Einstein-constant shift b. The first
/// three rows with b = 0 are the plain kernel equations.
struct LbarResidual {
  double interior = 0.0;   // sup |Ric'(h) - (n-1) Lambda h - (n-1) Lambda b g|
  double traceless = 0.0;  // sup |h^T - tr h^T g^T / (n-1)|
  double mean_curv = 0.0;  // sup |H'(h)|
  double volume = 0.0;     // int tr h dv + n V b
  double volume_ref = 0.0; // V
  double trace_sup = 0.0;  // sup |tr h^T|, to tell trivial from nontrivial boundary data
  std::size_t interior_nodes = 0;  // bulk nodes entering the interior sup
  std::size_t skipped_nodes = 0;   // bulk nodes where the chart is too ill-conditioned

  double kernel() const;   // max of the first three rows
};

/// The interior sup skips bulk nodes where cond(g) exceeds max_condition:
/// near the axis of a polar chart the coordinate components cancel to
/// roundoff of order eps / (r sin theta)^4.
inline constexpr double kMaxChartCondition = 1e4;
LbarResidual lbar_components(const LinearizedContext& ctx, const SymTensorField& h, double b, const DomainGrid& grid,
                             double max_condition = kMaxChartCondition);

struct ZeroMean {
  double lhs = 0.0;  // int_Sigma tr h^T H d sigma
  double rhs = 0.0;  // -(n-1)^2 Lambda int tr h dv
  double residual = 0.0;
  double hypothesis = 0.0;  // kernel residual with b = 0
};

ZeroMean zero_mean_residual(const LinearizedContext& ctx, const SymTensorField& h, const DomainGrid& grid);

struct HiddenBC {
  double hb1 = 0.0;
  double hb2 = 0.0;
  double l_sigma_trace = 0.0;  // sup |L_Sigma tr h^T|
  double hypothesis = 0.0;
  bool applicable = false;
};

/// Sup-norm defects of the two hidden boundary identities. They are only
/// meaningful when the hypothesis residual is below `hypothesis_tol`.
HiddenBC hidden_bc_residuals(const LinearizedContext& ctx, const SymTensorField& h, double b,
                             const DomainGrid& grid, double hypothesis_tol = 1e-6);

struct QuadraticForm {
  double vLv = 0.0;   // int v L v
  double HvLv = 0.0;  // int H v L v
  double vH = 0.0;    // int v H
  double vv = 0.0;    // int v^2
};

QuadraticForm nondegenerate_quadratic_form(const Hypersurface& sigma, const ScalarField& v,
                                           const QuadratureGrid& surface_grid);

/// int Div X dv - sum over faces of int X . nu d sigma.
double divergence_theorem_residual(const LinearizedContext& ctx, const VectorField& x, const DomainGrid& grid);

/// int <K h, gamma> - <h, K^* gamma> dv with K = Ric' - (n-1) Lambda; zero
/// for fields vanishing to second order on the boundary.
struct Adjointness {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};
Adjointness adjointness_residual(const LinearizedContext& ctx, const SymTensorField& h, const SymTensorField& gamma,
                                 const DomainGrid& grid);

/// int 1 dv.
double volume(const LinearizedContext& ctx, const DomainGrid& grid);

// ----------------------------------------------------------- serialization

std::string to_json(const DomainGrid& grid);  // grid spec: level, counts, per-face sizes
std::string to_json(const GreenTerms& r);
std::string to_json(const LbarResidual& r);
std::string to_json(const ZeroMean& r);
std::string to_json(const HiddenBC& r);
std::string to_json(const QuadraticForm& r);

}  // namespace einlab
