#pragma once

#include <span>
#include <vector>

#include "einlab/curvature.hpp"
#include "einlab/field.hpp"
#include "einlab/linearized.hpp"

namespace einlab {

/// Jets at one point of a coordinate level set {x^coord = level}.
///
/// Ambient quantities carry jets in all n chart variables; the surface
/// block (gt, A, H, ...) is stored after dropping the normal variable, so
/// it lives in the n - 1 surface coordinates, ordered as in the chart.
struct BoundaryFrame {
  int n = 0;
  int coord = 0;
  int orientation = 1;
  std::vector<int> tang;  // chart index of each surface coordinate

  LocalGeometry geo;    // ambient
  JTensor nu_lower;     // ambient jets, rank 1
  JTensor nu_upper;

  LocalGeometry sg;     // intrinsic geometry of the induced metric (surface jets)
  JTensor A;            // surface jets
  Jet H;
  Jet area;             // sqrt det gt, density of d sigma in surface coordinates

  const JTensor& gt() const { return sg.g; }
  const JTensor& gt_inv() const { return sg.ginv; }
};

/// Builds the frame from ambient metric jets. A and H come out one order
/// below the metric jets.
BoundaryFrame boundary_frame(const JTensor& g_jets, int coord, int orientation);

/// Ambient jets restricted to the surface (normal variable dropped).
JTensor to_surface(const JTensor& t, int coord);

/// The level set of one chart face, parametrized by the remaining coordinates.
class Hypersurface {
 public:
  Hypersurface(MetricField g, const Chart& chart, Face face);

  int ambient_dim() const { return n_; }
  int dim() const { return n_ - 1; }
  const Face& face() const { return face_; }
  const MetricField& metric() const { return g_; }
  const Chart& surface_chart() const { return surface_chart_; }

  std::vector<double> embed(std::span<const double> u) const;
  /// Frame at surface point u using ambient metric jets of `order`.
  BoundaryFrame frame(std::span<const double> u, int order) const;

  SymTensorField induced_metric() const;
  VectorField normal() const;  // ambient components of the outward unit normal
  SymTensorField second_fundamental() const;
  ScalarField mean_curv() const;
  ScalarField area_element() const;
  /// Induced metric wrapped as a MetricField on the surface chart.
  MetricField surface_metric() const;

 private:
  MetricField g_;
  Face face_;
  int n_ = 0;
  Chart surface_chart_;
};

/// Face index selects among chart.faces.
Hypersurface hypersurface_data(const MetricField& g, const Chart& chart, int face = 0);

struct SurfaceValues {
  Tensor gt, gt_inv, A, nu;  // nu: ambient upper components
  double H = 0.0;
  double area = 0.0;
  double R_sigma = 0.0;
};
SurfaceValues surface_values(const Hypersurface& s, std::span<const double> u);

/// |gamma|^{-1/(n-1)} gamma with |gamma| = det gamma / det background.
SymTensorField conformal_normalize(const SymTensorField& gamma, const SymTensorField& background);
double relative_determinant(const SymTensorField& gamma, const SymTensorField& background, std::span<const double> u);

struct AndersonData {
  SymTensorField conformal_rep;
  ScalarField mean_curv;
};
AndersonData anderson_data(const Hypersurface& s, const SymTensorField& background);

// ----------------------------------------------------------------- linearized

/// Surface jets of the linearized boundary quantities at one point.
struct LinBoundaryJets {
  JTensor ht;        // h restricted to T Sigma
  JTensor omega;     // omega_a = h(nu, e_a)
  Jet hnn;           // h(nu, nu)
  Jet tr_ht;         // tr_{gt} h^T
  JTensor A_prime;
  Jet H_prime;
  JTensor nu_prime;  // ambient upper components
};

/// h_jets are ambient jets at the frame's point. A' and H' lose one order
/// relative to min(order h, order g - 1).
LinBoundaryJets lin_boundary_jets(const BoundaryFrame& f, const JTensor& h_jets);

struct LinBoundary {
  Tensor nu_prime, A_prime, ht, omega;
  double H_prime = 0.0;
  double hnn = 0.0;
  double tr_ht = 0.0;
};

LinBoundary lin_boundary(const LinearizedContext& ctx, const SymTensorField& h, std::span<const double> u,
                         int face = 0);
LinBoundary lin_boundary(const Hypersurface& s, const SymTensorField& h, std::span<const double> u);

/// A'(h) and H'(h) as fields on the surface chart.
SymTensorField lin_second_fundamental(const Hypersurface& s, const SymTensorField& h);
ScalarField lin_mean_curv(const Hypersurface& s, const SymTensorField& h);

// ------------------------------------------------------------------ operators

/// L v = -Delta v - R v / (n - 2) for a hypersurface of an n-manifold.
/// Throws UnsupportedDimensionError for n < 3.
double L_sigma_apply(const Hypersurface& s, const ScalarField& v, std::span<const double> u);
/// Same for an intrinsic metric on Sigma; ambient_dim is n.
double L_sigma_apply(const MetricField& sigma_metric, int ambient_dim, const ScalarField& v,
                     std::span<const double> u);
Jet L_sigma_jets(const LocalGeometry& sg, int ambient_dim, const Jet& v);
ScalarField L_sigma(const Hypersurface& s, const ScalarField& v);

struct CauchyResidual {
  double tangential = 0.0;  // |h^T - tr h^T gt / (n-1)|
  double second_fundamental = 0.0;  // |A' - tr h^T A / (n-1)|
};
/// Sup over the given surface points of the conformal Cauchy defects.
CauchyResidual conformal_cauchy_residual(const Hypersurface& s, const SymTensorField& h,
                                         std::span<const std::vector<double>> points);

/// |Div A - dH| (Codazzi; needs an Einstein ambient).
double codazzi_residual(const Hypersurface& s, std::span<const double> u);
/// R_Sigma - (H^2 - |A|^2 + (n-1)(n-2) Lambda).
double gauss_residual(const Hypersurface& s, double lambda, std::span<const double> u);

}  // namespace einlab
