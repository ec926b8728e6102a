#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "einlab/jet.hpp"
#include "einlab/tensor.hpp"

namespace einlab {

enum class CoordKind {
  interval,  // plain closed interval
  polar,     // sphere polar angle in [0, pi]; endpoints are coordinate poles
  periodic,  // circle coordinate, box gives one period
};

/// Oriented coordinate level set {x^coord = level}. orientation is +1 when
/// the outward normal points toward increasing coord.
struct Face {
  int coord = 0;
  double level = 0.0;
  int orientation = 1;
};

struct Chart {
  int dim = 0;
  std::vector<std::pair<double, double>> box;
  std::vector<CoordKind> kinds;
  std::vector<Face> faces;
  /// Points closer than this (in radians) to a polar pole are outside.
  std::vector<double> excluded_caps;

  Chart() = default;
  Chart(std::vector<std::pair<double, double>> box, std::vector<CoordKind> kinds, std::vector<Face> faces = {});

  void validate() const;
  bool contains(std::span<const double> x) const;
};

enum class DerivativeMode { exact, finite_difference };

/// A smooth map from a chart into R^m, evaluated as Taylor jets.
///
/// Three backends: an analytic jet function (composable, exact), a
/// value-only function differentiated by central differences, and a
/// pointwise evaluator for derived quantities.
class Field {
 public:
  using JetFn = std::function<void(std::span<const Jet>, std::span<Jet>)>;
  using ValueFn = std::function<void(std::span<const double>, std::span<double>)>;
  using PointFn = std::function<std::vector<Jet>(std::span<const double>, int)>;

  Field() = default;

  /// fn maps input jets of order K to outputs of order K - order_loss.
  static Field analytic(int dim, int ncomp, JetFn fn, int order_loss = 0);
  static Field finite_difference(int dim, int ncomp, ValueFn fn, double scale = 1.0);
  static Field pointwise(int dim, int ncomp, PointFn fn, int max_order,
                         DerivativeMode mode = DerivativeMode::exact);

  int dim() const;
  int components() const;
  int max_order() const;
  DerivativeMode mode() const;
  bool composable() const;
  bool valid() const { return impl_ != nullptr; }

  /// Jets of every component at x, truncated to `order`.
  std::vector<Jet> evaluate(std::span<const double> x, int order) const;
  std::vector<double> values(std::span<const double> x) const;
  /// Compose with input jets; analytic fields only.
  std::vector<Jet> apply(std::span<const Jet> x) const;

  /// Same values, derivatives re-derived by finite differences.
  Field as_finite_difference(double scale = 1.0) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Field f);
  static ScalarField analytic(int dim, std::function<Jet(std::span<const Jet>)> fn);
  static ScalarField constant(int dim, double c);

  const Field& field() const { return f_; }
  int dim() const { return f_.dim(); }
  Jet jet(std::span<const double> x, int order) const { return f_.evaluate(x, order)[0]; }
  double value(std::span<const double> x) const { return f_.values(x)[0]; }
  Jet apply(std::span<const Jet> x) const { return f_.apply(x)[0]; }

 private:
  Field f_;
};

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(Field f);
  static VectorField analytic(int dim, std::function<void(std::span<const Jet>, std::span<Jet>)> fn);

  const Field& field() const { return f_; }
  int dim() const { return f_.dim(); }
  JTensor jets(std::span<const double> x, int order) const;
  JTensor apply(std::span<const Jet> x) const;

 private:
  Field f_;
};

/// Symmetric (0,2)-tensor stored as packed upper triangle, so h_ij = h_ji
/// holds exactly.
class SymTensorField {
 public:
  using Filler = std::function<void(std::span<const Jet>, JTensor&)>;

  SymTensorField() = default;
  explicit SymTensorField(Field packed);
  /// fill receives an n x n tensor and must set every (i, j) with i <= j.
  static SymTensorField analytic(int dim, Filler fill, int order_loss = 0);
  static SymTensorField from_values(int dim, std::function<void(std::span<const double>, Tensor&)> fill,
                                    double scale = 1.0);

  const Field& field() const { return f_; }
  int dim() const { return f_.dim(); }
  int max_order() const { return f_.max_order(); }
  JTensor jets(std::span<const double> x, int order) const;
  Tensor values(std::span<const double> x) const;
  JTensor apply(std::span<const Jet> x) const;

  SymTensorField as_finite_difference(double scale = 1.0) const;

 private:
  Field f_;
};

SymTensorField operator+(const SymTensorField& a, const SymTensorField& b);
SymTensorField operator*(double s, const SymTensorField& a);
/// Pointwise product u * a with a scalar field.
SymTensorField scaled(const ScalarField& u, const SymTensorField& a);

class MetricField : public SymTensorField {
 public:
  MetricField() = default;
  explicit MetricField(SymTensorField t, std::optional<double> einstein_constant = std::nullopt,
                       std::string name = {});

  std::optional<double> einstein_constant() const { return lambda_; }
  const std::string& name() const { return name_; }
  /// Jets of g_ij; throws DegenerateMetricError unless positive definite.
  JTensor metric_jets(std::span<const double> x, int order) const;

 private:
  std::optional<double> lambda_;
  std::string name_;
};

/// Jets of a value-only map from central differences with one Richardson
/// level. Step for derivatives of total order k is eps^(1/(k+4)) * scale.
std::vector<Jet> finite_difference_jets(const Field::ValueFn& fn, int dim, int ncomp, std::span<const double> x,
                                        int order, double scale);

/// Seeded coordinate jets at x.
std::vector<Jet> coordinate_jets(std::span<const double> x, int order);

}  // namespace einlab
