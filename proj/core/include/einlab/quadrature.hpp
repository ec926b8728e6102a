#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "einlab/field.hpp"

namespace einlab {

/// Gauss-Legendre nodes and weights on [a, b].
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Rule1D gauss_legendre(int m, double a = -1.0, double b = 1.0);
/// Equal-weight rule on one period [a, b), first node at a.
Rule1D periodic_trapezoid(int m, double a, double b);

/// Tensor-product rule over a chart box (coordinate measure only; the
/// metric density is applied by the integrand).
struct QuadratureGrid {
  int dim = 0;
  int level = 0;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Points per direction at a level: Gauss 2^(level-1), periodic 2^level.
int gauss_points(int level);
int periodic_points(int level);

QuadratureGrid product_grid(const std::vector<std::pair<double, double>>& box, const std::vector<CoordKind>& kinds,
                            int level);

/// Bulk grid plus one grid per chart face, the latter in the face's
/// remaining coordinates (chart order with the face coordinate removed).
struct DomainGrid {
  int level = 0;
  QuadratureGrid bulk;
  std::vector<QuadratureGrid> faces;
};

DomainGrid domain_grid(const Chart& chart, int level);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> terms);

/// Worker count for parallel_for; 0 selects hardware concurrency.
void set_thread_count(int threads);
int thread_count();

/// Calls fn(i) for i in [0, count) on the worker pool. Work is split by
/// index, so outputs written by index do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// sum_i w_i f(x_i) for `ncomp` integrands at once; evaluation runs in
/// parallel, summation is sequential and compensated.
std::vector<double> integrate(const QuadratureGrid& grid, int ncomp,
                              const std::function<void(std::span<const double>, std::span<double>)>& f);
double integrate(const QuadratureGrid& grid, const std::function<double(std::span<const double>)>& f);

struct ConvergenceFit {
  double order = 0.0;  // NaN when fewer than two usable points
  int used = 0;        // points above the noise floor
  bool at_floor = false;
};

/// Least-squares slope of -log|residual| against log N with N = 2^(level-1).
/// Residuals at or below `floor` are excluded.
ConvergenceFit fit_convergence(std::span<const int> levels, std::span<const double> residuals, double floor = 1e-13);

}  // namespace einlab
