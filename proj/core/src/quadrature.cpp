#include "einlab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "einlab/error.hpp"

namespace einlab {

namespace {

std::atomic<int> g_threads{0};

}  // namespace

Rule1D gauss_legendre(int m, double a, double b) {
  if (m < 1) throw DomainError("gauss_legendre: need at least one node");
  Rule1D r;
  r.nodes.resize(static_cast<std::size_t>(m));
  r.weights.resize(static_cast<std::size_t>(m));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_m
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    r.nodes[lo] = mid - half * x;
    r.nodes[hi] = mid + half * x;
    r.weights[lo] = r.weights[hi] = half * w;
  }
  if (m % 2 == 1) r.nodes[static_cast<std::size_t>(m / 2)] = mid;
  return r;
}

Rule1D periodic_trapezoid(int m, double a, double b) {
  if (m < 1) throw DomainError("periodic_trapezoid: need at least one node");
  Rule1D r;
  const double h = (b - a) / m;
  for (int j = 0; j < m; ++j) {
    r.nodes.push_back(a + j * h);
    r.weights.push_back(h);
  }
  return r;
}

int gauss_points(int level) { return 1 << std::max(level - 1, 0); }
int periodic_points(int level) { return 1 << std::max(level, 0); }

QuadratureGrid product_grid(const std::vector<std::pair<double, double>>& box, const std::vector<CoordKind>& kinds,
                            int level) {
  if (level < 1) throw DomainError("quadrature level must be >= 1");
  if (box.size() != kinds.size()) throw DomainError("product_grid: box and kinds differ in length");
  QuadratureGrid g;
  g.dim = static_cast<int>(box.size());
  g.level = level;
  std::vector<Rule1D> rules;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto [a, b] = box[i];
    rules.push_back(kinds[i] == CoordKind::periodic ? periodic_trapezoid(periodic_points(level), a, b)
                                                    : gauss_legendre(gauss_points(level), a, b));
  }
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();
  g.nodes.reserve(total);
  g.weights.reserve(total);
  std::vector<std::size_t> idx(rules.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<double> x(rules.size());
    double w = 1.0;
    for (std::size_t d = 0; d < rules.size(); ++d) {
      x[d] = rules[d].nodes[idx[d]];
      w *= rules[d].weights[idx[d]];
    }
    g.nodes.push_back(std::move(x));
    g.weights.push_back(w);
    for (std::size_t d = rules.size(); d-- > 0;) {
      if (++idx[d] < rules[d].nodes.size()) break;
      idx[d] = 0;
    }
  }
  return g;
}

DomainGrid domain_grid(const Chart& chart, int level) {
  chart.validate();
  DomainGrid dg;
  dg.level = level;
  dg.bulk = product_grid(chart.box, chart.kinds, level);
  for (const auto& f : chart.faces) {
    std::vector<std::pair<double, double>> box;
    std::vector<CoordKind> kinds;
    for (int i = 0; i < chart.dim; ++i) {
      if (i == f.coord) continue;
      box.push_back(chart.box[static_cast<std::size_t>(i)]);
      kinds.push_back(chart.kinds[static_cast<std::size_t>(i)]);
    }
    if (box.empty()) {
      // a point face, as for 1-d charts
      QuadratureGrid g;
      g.level = level;
      g.nodes.emplace_back();
      g.weights.push_back(1.0);
      dg.faces.push_back(std::move(g));
    } else {
      dg.faces.push_back(product_grid(box, kinds, level));
    }
  }
  return dg;
}

double compensated_sum(std::span<const double> terms) {
  double s = 0.0, c = 0.0;
  for (double t : terms) {
    const double u = s + t;
    if (std::abs(s) >= std::abs(t))
      c += (s - u) + t;
    else
      c += (t - u) + s;
    s = u;
  }
  return s + c;
}

void set_thread_count(int threads) { g_threads.store(std::max(threads, 0)); }

int thread_count() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto body = [&] {
    try {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        fn(i);
      }
    } catch (...) {
      bool expected = false;
      if (failed.compare_exchange_strong(expected, true)) err = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> integrate(const QuadratureGrid& grid, int ncomp,
                              const std::function<void(std::span<const double>, std::span<double>)>& f) {
  const std::size_t nc = static_cast<std::size_t>(ncomp);
  std::vector<double> vals(grid.size() * nc, 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    f(grid.nodes[i], std::span<double>(vals.data() + i * nc, nc));
  });
  std::vector<double> out(nc), terms(grid.size());
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i) terms[i] = grid.weights[i] * vals[i * nc + c];
    out[c] = compensated_sum(terms);
  }
  return out;
}

double integrate(const QuadratureGrid& grid, const std::function<double(std::span<const double>)>& f) {
  return integrate(grid, 1, [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); })[0];
}

ConvergenceFit fit_convergence(std::span<const int> levels, std::span<const double> residuals, double floor) {
  if (levels.size() != residuals.size()) throw DomainError("fit_convergence: size mismatch");
  ConvergenceFit fit;
  fit.order = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double r = std::abs(residuals[i]);
    if (!(r > floor)) {
      fit.at_floor = true;
      continue;
    }
    xs.push_back(std::log(static_cast<double>(gauss_points(levels[i]))));
    ys.push_back(-std::log(r));
  }
  fit.used = static_cast<int>(xs.size());
  if (xs.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.order = sxy / sxx;
  return fit;
}

}  // namespace einlab
