// One line per acceptance criterion. Exit status: with --strict any FAIL is
// an error; otherwise only failures not listed in kKnownFailures are.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "einlab/curvature.hpp"
#include "einlab/error.hpp"
#include "einlab/green.hpp"
#include "einlab/oracle.hpp"
#include "einlab/schwarzschild.hpp"

using namespace einlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

// Criteria whose literal statement contradicts the closed form they cite.
const std::map<int, const char*> kKnownFailures{
    {2, "0.037 < 1/27 = 0.0370370..., so the closed form accepts Lambda = 0.037"},
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// largest admissible Lambda for (n, m)
double lambda_max(int n, double m) {
  return std::pow(SchwarzschildParams{n, 0.0, m}.lambda_bound() / (m * m), 1.0 / (n - 3));
}

bool rejected(int n, double lambda, double m) {
  try {
    make_params(n, lambda, m);
    return false;
  } catch (const ParameterError&) {
    return true;
  }
}

Outcome schwarzschild_constants() {
  const auto p = make_params(4, 0.0, 1.0);
  const auto rd = roots(p);
  const double sc = s_crit(p).value_or(std::numeric_limits<double>::quiet_NaN());
  const double psc = p_of_s(p, sc);
  const double e = std::max({std::abs(rd.r0 - 2.0), std::abs(rd.ell - 2.0), std::abs(sc - std::cbrt(16.0)),
                             std::abs(psc - (3.0 * std::pow(16.0, 2.0 / 3.0) - 16.0))});
  return {e < 1e-10, "r0=" + fmt(rd.r0) + " ell=" + fmt(rd.ell) + " s_c=" + fmt(sc) + " p(s_c)=" + fmt(psc) +
                         " max err " + fmt(e)};
}

Outcome lambda_threshold() {
  const double bound = SchwarzschildParams{4, 0.0, 1.0}.lambda_bound();
  const bool closed_form = std::abs(bound - 1.0 / 27.0) < 1e-15;
  // consistency of the constructor with m^2 Lambda < 1/27 across masses
  bool consistent = true;
  for (double m : {0.5, 1.0, 2.0, 3.0})
    for (double x : {0.9, 0.999, 0.999999, 1.0, 1.000001, 1.1}) {
      const double lambda = x / (27.0 * m * m);
      consistent = consistent && (rejected(4, lambda, m) == !(x < 1.0));
    }
  const bool accepts_0369 = !rejected(4, 0.0369, 1.0);
  const bool rejects_037 = rejected(4, 0.037, 1.0);
  std::ostringstream d;
  d << "bound " << fmt(bound) << (closed_form ? " (= 1/27)" : " (!= 1/27)") << ", 0.0369 "
    << (accepts_0369 ? "accepted" : "rejected") << ", 0.037 " << (rejects_037 ? "rejected" : "accepted")
    << ", constructor vs closed form " << (consistent ? "consistent" : "INCONSISTENT");
  return {closed_form && consistent && accepts_0369 && rejects_037, d.str()};
}

Outcome product_boundary_curvature() {
  Rng rng(2024);
  double worst = 0.0;
  int samples = 0;
  while (samples < 20) {
    const int n = 4 + samples % 3;
    const double m = rng.uniform(0.3, 2.0);
    const int kind = samples % 4;  // cycle through the Lambda signs
    double lambda = 0.0;
    if (kind == 1) lambda = -rng.uniform(0.01, 2.0);
    if (kind == 2) lambda = rng.uniform(0.05, 0.9) * lambda_max(n, m);
    const auto p = make_params(n, lambda, m);
    const auto rd = roots(p);
    const double hi = std::isinf(rd.r1) ? 5.0 * rd.r0 : rd.r1;
    const double s = rd.r0 + rng.uniform(0.05, 0.95) * (hi - rd.r0);
    const double expected = (n - 3.0) * (n - 2.0) / (s * s);
    const auto gb = product_boundary_metric(n, rd.ell, f_of_r(p, s), s);
    std::vector<double> u(static_cast<std::size_t>(n - 1));
    for (auto& v : u) v = rng.uniform(0.5, 2.5);
    worst = std::max(worst, std::abs(scalar_curv(gb, u) - expected));
    // same quantity through the hypersurface engine on the Schwarzschild chart
    const auto sigma = hypersurface_data(schwarzschild_metric(p, rd), schwarzschild_chart(p, rd, s), 0);
    worst = std::max(worst, std::abs(surface_values(sigma, u).R_sigma - expected));
    ++samples;
  }
  return {worst < 1e-8, std::to_string(samples) + " samples, max |R_Sigma - (n-3)(n-2)/s^2| = " + fmt(worst)};
}

Outcome spectral_equivalence() {
  struct Family {
    int n;
    double lambda;
  };
  std::vector<Family> fams;
  for (int n : {4, 5})
    for (double lambda : {-2.0, -0.3, -0.02, 0.0, 0.3, 0.9}) {
      const double l = lambda > 0 ? lambda * lambda_max(n, 1.0) : lambda;
      fams.push_back({n, l});
    }
  const int per = 500 / static_cast<int>(fams.size()) + 1;
  int points = 0, checked = 0, mismatches = 0, banded = 0;
  int signs[3] = {0, 0, 0};
  for (const auto& f : fams) {
    const auto p = make_params(f.n, f.lambda, 1.0);
    const auto rd = roots(p);
    const double hi = std::isinf(rd.r1) ? 8.0 * rd.r0 : rd.r1;
    for (int i = 0; i < per && points < 500; ++i, ++points) {
      const double s = rd.r0 + (hi - rd.r0) * (i + 0.5) / per;
      const double pv = p_of_s(p, s);
      ++signs[f.lambda < 0 ? 0 : (f.lambda == 0 ? 1 : 2)];
      if (std::abs(pv) <= 1e-10) {
        ++banded;
        continue;
      }
      ++checked;
      try {
        const auto row = sweep_point(p, s);
        if ((row.lambda_min > 0) != (pv > 0)) ++mismatches;
      } catch (const ConsistencyError&) {
        ++mismatches;
      }
    }
  }
  std::ostringstream d;
  d << points << " points (" << signs[0] << " Lambda<0, " << signs[1] << " Lambda=0, " << signs[2]
    << " Lambda>0), " << checked << " compared, " << mismatches << " sign mismatches, " << banded << " in band";
  return {points == 500 && mismatches == 0 && signs[0] > 0 && signs[1] > 0 && signs[2] > 0, d.str()};
}

Outcome lemma_cases() {
  Rng rng(62);
  int fails[4] = {0, 0, 0, 0};
  int trials[4] = {0, 0, 0, 0};
  // (a) Lambda = 0: positive near r0 and for large s
  for (int t = 0; t < 50; ++t) {
    const int n = 4 + t % 4;
    const auto p = make_params(n, 0.0, rng.uniform(0.1, 5.0));
    const auto rep = classify_range(p, {});
    const double big = 1e4 * rep.r0;
    ++trials[0];
    if (!rep.near_r0_positive || !rep.large_s_positive.value_or(false) || !(p_of_s(p, big) > 0)) ++fails[0];
  }
  // (b) Lambda < 0: large-s positivity iff Lambda > -1/(4(n-3) ell^2), both sides via the period constant
  for (int t = 0; t < 50; ++t) {
    const int n = 4 + t % 3;
    const auto p = make_params(n, -rng.uniform(0.01, 3.0), rng.uniform(0.2, 3.0));
    const double ell_star = 1.0 / std::sqrt(4.0 * (n - 3) * -p.lambda);
    for (double ell : {roots(p).ell, 0.7 * ell_star, 1.3 * ell_star}) {
      const auto rep = classify_range(p, {}, ell);
      const bool predicted = p.lambda > rep.threshold;
      const double big = 1e6 * std::max(rep.r0, ell);
      ++trials[1];
      if (rep.large_s_positive.value_or(!predicted) != predicted ||
          (p_of_s_with_period(p, ell, big) > 0) != predicted)
        ++fails[1];
    }
  }
  // (c) Lambda > 0: positive near both roots
  for (int t = 0; t < 50; ++t) {
    const int n = 4 + t % 3;
    const double m = rng.uniform(0.2, 2.0);
    const auto p = make_params(n, rng.uniform(0.01, 0.99) * lambda_max(n, m), m);
    const auto rep = classify_range(p, {});
    ++trials[2];
    if (!rep.near_r0_positive || !rep.near_r1_positive.value_or(false)) ++fails[2];
  }
  // (d) n = 4, Lambda = 0: p > 0 on all of [r0, inf)
  for (int t = 0; t < 20; ++t) {
    const auto p = make_params(4, 0.0, rng.uniform(0.1, 10.0));
    const auto rd = roots(p);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(rd.r0 * std::pow(1000.0, i / 400.0));
    const auto rep = classify_range(p, grid);
    ++trials[3];
    if (!rep.global_positive || !(rep.grid_min_p > 0)) ++fails[3];
  }
  std::ostringstream d;
  const char* names = "abcd";
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    d << (i ? ", " : "") << '(' << names[i] << ") " << trials[i] - fails[i] << '/' << trials[i];
    ok = ok && fails[i] == 0;
  }
  return {ok, d.str()};
}

Outcome green_annulus() {
  const Domain d = make_domain("euclidean-annulus");
  const auto h = random_field(d, 7), w = random_field(d, 8);
  const std::vector<int> levels{3, 4, 5};
  std::vector<double> res;
  for (int L : levels) res.push_back(green_residual(d.ctx, h, w, make_grid(d, L)));
  const auto g3 = make_grid(d, 3);
  const double anti = green_residual(d.ctx, h, w, g3) + green_residual(d.ctx, w, h, g3);
  const auto fit = fit_convergence(levels, res);
  const bool order_ok = std::isnan(fit.order) ? fit.at_floor : fit.order >= 2.0;
  std::ostringstream dd;
  dd << "residuals " << fmt(res[0]) << ", " << fmt(res[1]) << ", " << fmt(res[2]) << "; order " << fmt(fit.order)
     << "; antisymmetry " << fmt(anti);
  return {order_ok && std::abs(res.back()) < 1e-5 && anti == 0.0, dd.str()};
}

Outcome operator_oracles() {
  double ric = 0.0, bnd = 0.0, tri = 0.0, lap = 0.0, adj = 0.0, dil = 0.0;
  for (const char* name : {"euclidean-ball", "hyperbolic-ball", "schwarzschild", "ads-schwarzschild"}) {
    const Domain d = make_domain(name);
    const bool schw = d.kind == DomainKind::schwarzschild;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto h = random_field(d, seed);
      for (const auto& x : d.ctx.points()) {
        ric = std::max(ric, lin_ricci_vs_fd(d.ctx, h, x).mixed());
        const auto ginv = values(local_geometry(d.metric(), x, 0).ginv);
        lap = std::max(lap, norm(laplace0_residual(d.ctx, random_vector_field(d, seed), x), ginv));
      }
      const auto gamma = schw ? random_chart_field(d, seed) : random_field(d, seed);
      adj = std::max(adj, adjoint_divergence_residual(d.ctx, gamma, d.ctx.points()));
    }
    const auto sigma = d.boundary();
    const auto nodes = make_grid(d, 2).faces.at(0).nodes;
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const auto h = random_field(d, seed);
      for (const auto& u : nodes) {
        const auto b = lin_boundary_vs_fd(sigma, h, u);
        bnd = std::max({bnd, b.A_prime.mixed(), b.H_prime.mixed()});
        tri = std::max(tri, std::abs(trace_identity_residual(sigma, h, u)));
      }
    }
    if (d.kind == DomainKind::ball && d.name == "euclidean-ball") {
      const auto fnodes = make_grid(d, 3).faces.at(0).nodes;
      for (double t : {0.25, 0.5}) {
        const auto r = dilation_scaling_check(d.ctx, random_field(d, 3), t, fnodes);
        dil = std::max({dil, r.ricci, r.traceless, r.mean_curv});
      }
    }
  }
  std::ostringstream d;
  d << "lin_ricci " << fmt(ric) << ", A'/H' " << fmt(bnd) << ", trace id " << fmt(tri) << ", laplace0 "
    << fmt(lap) << ", adjoint div " << fmt(adj) << ", dilation " << fmt(dil);
  return {ric < 1e-6 && bnd < 1e-5 && tri < 1e-8 && lap < 1e-7 && adj < 1e-6 && dil < 1e-8, d.str()};
}

Outcome kernel_exhibits() {
  double triv = 0.0;
  bool applicable = true;
  for (const char* name : {"euclidean-ball", "hyperbolic-ball", "ads-schwarzschild"}) {
    const Domain d = make_domain(name);
    const auto g = make_grid(d, d.n == 3 ? 4 : 3);
    const auto h = trivial_kernel(d, 5);
    const auto l = lbar_components(d.ctx, h, 0.0, g);
    const auto z = zero_mean_residual(d.ctx, h, g);
    const auto hb = hidden_bc_residuals(d.ctx, h, 0.0, g);
    applicable = applicable && hb.applicable;
    triv = std::max({triv, l.kernel(), std::abs(l.volume), z.residual, hb.hb1, hb.hb2});
  }
  double ex = 0.0, trace = std::numeric_limits<double>::infinity();
  for (const char* name : {"euclidean-ball", "hyperbolic-ball"}) {
    const Domain d = make_domain(name);
    const auto g = make_grid(d, 4);
    const auto h = conformal_kernel(d, 9);
    const auto l = lbar_components(d.ctx, h, 0.0, g);
    const auto cc = conformal_cauchy_residual(d.boundary(), h, g.faces.at(0).nodes);
    ex = std::max({ex, l.kernel(), cc.tangential, cc.second_fundamental});
    trace = std::min(trace, l.trace_sup);
  }
  std::ostringstream d;
  d << "trivial kernel " << fmt(triv) << (applicable ? "" : " (hypothesis not met)") << "; conformal kernel "
    << fmt(ex) << " with sup |tr h^T| " << fmt(trace);
  return {triv < 1e-6 && applicable && ex < 1e-8 && trace > 1e-3, d.str()};
}

Outcome desingularization() {
  double ode = 0.0, ein = 0.0, min_defect = std::numeric_limits<double>::infinity();
  for (int n : {4, 5}) {
    for (double lambda : {-1.0, -0.1, 0.0, 0.3, 0.8}) {
      const double l = lambda > 0 ? lambda * lambda_max(n, 1.0) : lambda;
      const auto p = make_params(n, l, 1.0);
      const auto d = desing(p);
      const auto& rd = d.root_data();
      const double hi = std::isinf(rd.r1) ? 5.0 * rd.r0 : rd.r1;
      for (int i = 1; i < 50; ++i) {
        const double r = rd.r0 + (hi - rd.r0) * (0.01 + 0.98 * i / 50.0);
        const double f = f_of_r(p, r);
        ode = std::max(ode, std::abs(rd.ell * d.Fprime(r) / d.F(r) - 1.0 / f) / std::max(1.0, 1.0 / f));
      }
      const auto g = desingularized_metric(d);
      std::vector<std::vector<double>> pts{{0.0, 0.0, 1.0, 0.5}};
      if (n == 5) pts[0].push_back(0.3);
      for (double F : {1e-2, 1e-4, 1e-8, 1e-12}) {
        auto a = pts[0], b = pts[0];
        a[0] = std::sqrt(F);
        b[0] = std::sqrt(F / 2);
        b[1] = std::sqrt(F / 2);
        pts.push_back(a);
        pts.push_back(b);
      }
      ein = std::max(ein, einstein_residual(g, l, pts));
    }
    for (int i = 1; i < 100; ++i)
      min_defect = std::min(min_defect, conical_defect(make_params(n, lambda_max(n, 1.0) * i / 100.0, 1.0)));
  }
  std::ostringstream dd;
  dd << "ODE residual " << fmt(ode) << ", Einstein residual near r0 " << fmt(ein) << ", min conical defect "
     << fmt(min_defect);
  return {ode < 1e-9 && ein < 1e-6 && min_defect > 0.0, dd.str()};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--criterion N]\n", argv[0]);
      return 1;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "Schwarzschild constants", 1.0, schwarzschild_constants},
      {2, "Lambda threshold", 1.0, lambda_threshold},
      {3, "boundary scalar curvature", 10.0, product_boundary_curvature},
      {4, "spectral/criterion equivalence", 30.0, spectral_equivalence},
      {5, "p(s) case studies", 30.0, lemma_cases},
      {6, "Green identity on the annulus", 60.0, green_annulus},
      {7, "linearized-operator oracles", 120.0, operator_oracles},
      {8, "kernel exhibits", 60.0, kernel_exhibits},
      {9, "desingularization", 30.0, desingularization},
  };
  int unexpected = 0, failed = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d: %s  %-32s %7.2f s (< %g s)  %s\n", c.id, pass ? "PASS" : "FAIL", c.title, secs,
                c.budget_s, o.detail.c_str());
    if (!in_time) std::printf("    over the time budget\n");
    if (!pass) {
      ++failed;
      const auto k = kKnownFailures.find(c.id);
      if (k != kKnownFailures.end() && o.pass == false && in_time) {
        std::printf("    known: %s\n", k->second);
      } else {
        ++unexpected;
      }
    }
    std::fflush(stdout);
  }
  std::printf("%d failed (%d unexpected)\n", failed, unexpected);
  if (strict) return failed ? 2 : 0;
  return unexpected ? 2 : 0;
}
