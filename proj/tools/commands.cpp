#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "einlab/error.hpp"
#include "einlab/green.hpp"
#include "einlab/oracle.hpp"
#include "einlab/schwarzschild.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace einlab::cli {

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedDimensionError& e) {
    err << "unsupported dimension: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConsistencyError& e) {
    err << "internal inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "cannot write output: " << e.what() << '\n';
    return kUsage;
  }
}

void require_positive(const char* name, double v) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

Json parsed(const std::string& s) { return Json::parse(s); }

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

Json fit_json(const ConvergenceFit& f) {
  Json j;
  j["order"] = std::isnan(f.order) ? Json(nullptr) : Json(f.order);
  j["points_used"] = f.used;
  j["at_floor"] = f.at_floor;
  return j;
}

bool converged(const ConvergenceFit& f, double min_order) {
  if (std::isnan(f.order)) return f.at_floor;
  return f.order >= min_order;
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto to_d = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + t + "' in range '" + spec + "'");
    }
    if (used != t.size()) throw std::invalid_argument("bad number '" + t + "' in range '" + spec + "'");
    return v;
  };
  if (parts.size() == 1) return {to_d(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("range must be a:b:step, got '" + spec + "'");
  const double a = to_d(parts[0]), b = to_d(parts[1]), step = to_d(parts[2]);
  if (!(step > 0.0) || b < a) throw std::invalid_argument("range needs a <= b and step > 0");
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 1000000) throw std::invalid_argument("range has too many points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

const std::vector<std::string>& green_checks() {
  static const std::vector<std::string> c{"green",          "zero-mean",   "hidden-bc", "lbar",
                                          "trivial-kernel", "example-2.2", "divergence", "adjoint",
                                          "quadratic-form"};
  return c;
}

const std::vector<std::string>& linops_checks() {
  static const std::vector<std::string> c{"ric-prime", "lin-boundary", "laplace0", "adjoint-div", "dilation",
                                          "recombination"};
  return c;
}

// ------------------------------------------------------------ schwarzschild

int cmd_schwarzschild(const SchwarzschildOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_positive("band", o.band);
    const auto p = make_params(o.n, o.lambda, o.m);
    const auto rd = roots(p);
    std::vector<double> grid;
    if (o.s.empty()) {
      const double hi = std::isfinite(rd.r1) ? rd.r0 + 0.999 * (rd.r1 - rd.r0) : 4.0 * rd.r0;
      for (int i = 0; i < 80; ++i) grid.push_back(rd.r0 + (hi - rd.r0) * i / 79.0);
    } else {
      grid = parse_range(o.s);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<SweepRow> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { rows[i] = sweep_point(p, grid[i], o.band); });

    RunMeta meta;
    meta.command = "schwarzschild";
    meta.seed = o.seed;
    meta.config["n"] = o.n;
    meta.config["lambda"] = o.lambda;
    meta.config["m"] = o.m;
    meta.config["s"] = o.s.empty() ? std::string("auto") : o.s;
    meta.config["csv"] = o.csv;
    meta.config["svg"] = o.svg;
    meta.tolerances["band"] = o.band;
    const Json head = header(meta);

    std::ostringstream csv;
    csv << "# " << head.dump() << '\n';
    csv << "n,lambda,m,s,r0,r1,ell,p,lambda_min,class\n";
    for (const auto& r : rows) {
      csv << r.n << ',' << num(r.lambda) << ',' << num(r.m) << ',' << num(r.s) << ',' << num(r.r0) << ','
          << num(r.r1) << ',' << num(r.ell) << ',' << num(r.p) << ',' << num(r.lambda_min) << ','
          << to_string(r.cls) << '\n';
    }
    const auto csv_path = output_path(o.out_dir, o.csv);
    write_text(csv_path, csv.str());

    Series ps{"p(s) = s^2 - 4(n-3) ell^2 f(s)", {}, {}};
    Series ls{"second eigenvalue of L_Sigma", {}, {}};
    for (const auto& r : rows) {
      ps.x.push_back(r.s);
      ps.y.push_back(r.p);
      ls.x.push_back(r.s);
      ls.y.push_back(r.lambda_min);
    }
    std::ostringstream title;
    title << "n = " << o.n << ", Lambda = " << num(o.lambda) << ", m = " << num(o.m);
    const auto svg_path = output_path(o.out_dir, o.svg);
    write_text(svg_path, stacked_plot(title.str(), "s", {ps, ls}, head.dump(2)));

    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : rows) ++counts[static_cast<int>(r.cls)];
    out << "r0 = " << num(rd.r0) << ", r1 = " << num(rd.r1) << ", ell = " << num(rd.ell) << '\n';
    if (const auto sc = s_crit(p)) out << "s_c = " << num(*sc) << ", p(s_c) = " << num(p_of_s_with_period(p, rd.ell, *sc)) << '\n';
    if (rows.size() <= 25) {
      for (const auto& r : rows)
        out << "s = " << num(r.s) << "  p = " << num(r.p) << "  lambda_2 = " << num(r.lambda_min)
            << "  class = " << to_string(r.cls) << '\n';
    }
    out << rows.size() << " rows: " << counts[0] << " nondegenerate, " << counts[1] << " degenerate, " << counts[2]
        << " boundary-case\n";
    out << "wrote " << csv_path.string() << " and " << svg_path.string() << '\n';
    return static_cast<int>(kPass);
  });
}

// -------------------------------------------------------------------- green

namespace {

std::vector<std::vector<double>> face_nodes(const DomainGrid& g, int face = 0) {
  return g.faces.at(static_cast<std::size_t>(face)).nodes;
}

struct CheckResult {
  bool pass = false;
  Json body;
  std::string summary;
};

CheckResult green_refinement(const Domain& d, const std::vector<int>& levels, const GreenOptions& o, double tol) {
  const auto h = random_field(d, o.seed);
  const auto w = random_field(d, o.seed + 1);
  CheckResult r;
  std::vector<double> res;
  Json rows = Json::array();
  for (int L : levels) {
    const auto g = make_grid(d, L);
    const auto t = green_terms(d.ctx, h, w, g);
    res.push_back(t.residual);
    Json row;
    row["level"] = L;
    row["grid"] = parsed(to_json(g));
    row["terms"] = parsed(to_json(t));
    rows.push_back(row);
  }
  const auto g0 = make_grid(d, levels.front());
  const double anti = green_residual(d.ctx, h, w, g0) + green_residual(d.ctx, w, h, g0);
  const auto fit = fit_convergence(levels, res);
  const double final_res = std::abs(res.back());
  r.pass = converged(fit, o.min_order) && final_res < tol && anti == 0.0;
  r.body["levels"] = rows;
  r.body["fit"] = fit_json(fit);
  r.body["antisymmetry"] = anti;
  r.body["final_residual"] = final_res;
  std::ostringstream s;
  for (std::size_t i = 0; i < levels.size(); ++i)
    s << "level " << levels[i] << ": residual " << num(res[i]) << '\n';
  s << "fitted order " << (std::isnan(fit.order) ? std::string("n/a") : num(fit.order))
    << (fit.at_floor ? " (roundoff floor reached)" : "") << ", antisymmetry " << num(anti);
  r.summary = s.str();
  return r;
}

template <class Residual>
CheckResult refinement_study(const std::vector<int>& levels, const GreenOptions& o, double tol, Residual&& fn) {
  CheckResult r;
  std::vector<double> res;
  Json rows = Json::array();
  for (int L : levels) {
    const double v = fn(L);
    res.push_back(v);
    Json row;
    row["level"] = L;
    row["residual"] = v;
    rows.push_back(row);
  }
  const auto fit = fit_convergence(levels, res);
  r.pass = converged(fit, o.min_order) && std::abs(res.back()) < tol;
  r.body["levels"] = rows;
  r.body["fit"] = fit_json(fit);
  std::ostringstream s;
  for (std::size_t i = 0; i < levels.size(); ++i)
    s << "level " << levels[i] << ": residual " << num(res[i]) << '\n';
  s << "fitted order " << (std::isnan(fit.order) ? std::string("n/a") : num(fit.order))
    << (fit.at_floor ? " (roundoff floor reached)" : "");
  r.summary = s.str();
  return r;
}

// Areal radius of the round boundary sphere of a ball-like domain (face 0).
double areal_radius(const Domain& d) {
  const double rho = d.kind == DomainKind::annulus ? d.inner : d.outer;
  return d.metric().einstein_constant().value_or(0.0) < 0.0 ? 2.0 * rho / (1.0 - rho * rho) : rho;
}

}  // namespace

int cmd_green(const GreenOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (std::find(green_checks().begin(), green_checks().end(), o.check) == green_checks().end())
      throw std::invalid_argument("unknown check '" + o.check + "'");
    if (o.tol) require_positive("tol", *o.tol);
    require_positive("min-order", o.min_order);
    const Domain d = make_domain(o.domain, o.n);
    std::vector<int> levels = o.levels;
    if (levels.empty()) levels = d.n <= 3 ? std::vector<int>{3, 4, 5} : std::vector<int>{3, 4};
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int L : levels)
      if (L < 1 || L > 8) throw std::invalid_argument("levels must lie in 1..8");
    const int finest = levels.back();

    double tol = 1e-6;
    if (o.check == "green") tol = 1e-5;
    if (o.tol) tol = *o.tol;

    CheckResult r;
    if (o.check == "green") {
      r = green_refinement(d, levels, o, tol);
    } else if (o.check == "divergence") {
      r = refinement_study(levels, o, tol, [&](int L) {
        const auto g = make_grid(d, L);
        double worst = 0.0;
        for (std::uint64_t k = 0; k < 10; ++k) {
          const double v = divergence_theorem_residual(d.ctx, random_vector_field(d, o.seed + k), g);
          worst = std::max(worst, std::abs(v));
        }
        return worst;
      });
    } else if (o.check == "adjoint") {
      const auto h = bump_field(d, o.seed);
      const auto gamma = bump_field(d, o.seed + 1);
      r = refinement_study(levels, o, tol, [&](int L) {
        return std::abs(adjointness_residual(d.ctx, h, gamma, make_grid(d, L)).residual);
      });
    } else {
      const auto g = make_grid(d, finest);
      r.body["level"] = finest;
      r.body["grid"] = parsed(to_json(g));
      std::ostringstream s;
      if (o.check == "zero-mean") {
        const auto z = zero_mean_residual(d.ctx, trivial_kernel(d, o.seed), g);
        r.body["generator"] = "trivial-kernel";
        r.body["zero_mean"] = parsed(to_json(z));
        r.pass = z.hypothesis < 1e-6 && z.residual < tol;
        s << "lhs " << num(z.lhs) << ", rhs " << num(z.rhs) << ", residual " << num(z.residual)
          << ", hypothesis " << num(z.hypothesis);
      } else if (o.check == "hidden-bc") {
        const auto hb = hidden_bc_residuals(d.ctx, trivial_kernel(d, o.seed), o.b, g);
        r.body["generator"] = "trivial-kernel";
        r.body["hidden_bc"] = parsed(to_json(hb));
        r.pass = hb.applicable && hb.hb1 < tol && hb.hb2 < tol;
        s << "hb1 " << num(hb.hb1) << ", hb2 " << num(hb.hb2) << ", hypothesis " << num(hb.hypothesis)
          << (hb.applicable ? "" : " (hypothesis not met)");
      } else if (o.check == "lbar") {
        const auto l = lbar_components(d.ctx, trivial_kernel(d, o.seed), o.b, g);
        r.body["generator"] = "trivial-kernel";
        r.body["b"] = o.b;
        r.body["lbar"] = parsed(to_json(l));
        r.pass = l.kernel() < tol && std::abs(l.volume) < tol;
        s << "interior " << num(l.interior) << ", traceless " << num(l.traceless) << ", H' " << num(l.mean_curv)
          << ", volume " << num(l.volume);
      } else if (o.check == "trivial-kernel") {
        const auto h = trivial_kernel(d, o.seed);
        const auto l = lbar_components(d.ctx, h, 0.0, g);
        const auto z = zero_mean_residual(d.ctx, h, g);
        const auto hb = hidden_bc_residuals(d.ctx, h, 0.0, g);
        r.body["lbar"] = parsed(to_json(l));
        r.body["zero_mean"] = parsed(to_json(z));
        r.body["hidden_bc"] = parsed(to_json(hb));
        r.pass = l.kernel() < tol && z.residual < tol && hb.applicable && hb.hb1 < tol && hb.hb2 < tol;
        s << "kernel " << num(l.kernel()) << ", zero-mean " << num(z.residual) << ", hb1 " << num(hb.hb1)
          << ", hb2 " << num(hb.hb2);
      } else if (o.check == "example-2.2") {
        if (d.kind != DomainKind::ball) throw DomainError("example-2.2 needs a ball domain");
        const auto h = conformal_kernel(d, o.seed);
        const auto l = lbar_components(d.ctx, h, 0.0, g);
        const auto cc = conformal_cauchy_residual(d.boundary(), h, face_nodes(g));
        const auto hb = hidden_bc_residuals(d.ctx, h, 0.0, g);
        const auto z = zero_mean_residual(d.ctx, h, g);
        const bool nontrivial = l.trace_sup > 1e-3;
        r.body["generator"] = "conformal-kernel";
        r.body["lbar"] = parsed(to_json(l));
        r.body["cauchy"] = Json{{"tangential", cc.tangential}, {"second_fundamental", cc.second_fundamental}};
        r.body["hidden_bc"] = parsed(to_json(hb));
        r.body["zero_mean"] = parsed(to_json(z));
        r.body["nontrivial_kernel"] = nontrivial;
        const double ctol = std::min(tol, 1e-8);
        r.pass = l.kernel() < tol && cc.tangential < ctol && cc.second_fundamental < ctol && nontrivial &&
                 hb.l_sigma_trace < tol;
        s << "kernel " << num(l.kernel()) << ", cauchy " << num(std::max(cc.tangential, cc.second_fundamental))
          << ", sup |tr h^T| " << num(l.trace_sup) << ", L_Sigma tr h^T " << num(hb.l_sigma_trace)
          << (nontrivial ? "  [nontrivial kernel]" : "");
      } else {  // quadratic-form
        const auto sigma = d.boundary();
        const auto& fg = g.faces.at(0);
        const int n = d.n;
        ScalarField one = ScalarField::constant(n - 1, 1.0);
        ScalarField mode;
        double lam0 = 0.0, lam1 = 0.0;
        if (d.kind == DomainKind::schwarzschild) {
          const double ell = d.root_data->ell;
          mode = ScalarField::analytic(n - 1, [ell](std::span<const Jet> u) { return cos(u[0] / (2.0 * ell)); });
          lam0 = mode_eigenvalue(*d.params, *d.root_data, d.s, 0, 0);
          lam1 = mode_eigenvalue(*d.params, *d.root_data, d.s, 1, 0);
        } else {
          mode = ScalarField::analytic(n - 1, [](std::span<const Jet> u) { return cos(u[0]); });
          const double ra = areal_radius(d);
          lam0 = -(n - 1.0) / (ra * ra);
          lam1 = 0.0;
        }
        const auto q0 = nondegenerate_quadratic_form(sigma, one, fg);
        const auto q1 = nondegenerate_quadratic_form(sigma, mode, fg);
        const double e0 = std::abs(q0.vLv - lam0 * q0.vv) / std::max(1.0, std::abs(lam0 * q0.vv));
        const double e1 = std::abs(q1.vLv - lam1 * q1.vv) / std::max(1.0, std::abs(lam1 * q1.vv));
        const double ctol = std::min(tol, 1e-8);
        r.body["constant"] = parsed(to_json(q0));
        r.body["first_mode"] = parsed(to_json(q1));
        r.body["expected_eigenvalues"] = Json{lam0, lam1};
        r.body["errors"] = Json{e0, e1};
        r.pass = e0 < ctol && e1 < ctol && std::abs(q1.vH) < ctol * std::max(1.0, std::abs(q0.vH));
        s << "v = 1: int vLv " << num(q0.vLv) << " (expected " << num(lam0 * q0.vv) << "), int vH " << num(q0.vH)
          << "\nfirst mode: int vLv " << num(q1.vLv) << " (expected " << num(lam1 * q1.vv) << "), int vH "
          << num(q1.vH);
      }
      r.summary = s.str();
    }

    RunMeta meta;
    meta.command = "green";
    meta.seed = o.seed;
    meta.config["domain"] = o.domain;
    meta.config["n"] = d.n;
    meta.config["levels"] = levels;
    meta.config["check"] = o.check;
    meta.config["b"] = o.b;
    meta.tolerances["tol"] = tol;
    meta.tolerances["min_order"] = o.min_order;
    meta.tolerances["hypothesis"] = 1e-6;
    Json doc = header(meta);
    doc["result"] = r.body;
    doc["pass"] = r.pass;
    const auto path = output_path(o.out_dir, o.out.empty() ? "green-" + o.domain + "-" + o.check + ".json" : o.out);
    write_text(path, doc.dump(2) + "\n");
    out << o.check << " on " << o.domain << " (n = " << d.n << ")\n" << r.summary << '\n';
    out << verdict(r.pass) << "  (report: " << path.string() << ")\n";
    return static_cast<int>(r.pass ? kPass : kInconsistent);
  });
}

// ------------------------------------------------------------------- linops

int cmd_linops(const LinopsOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (std::find(linops_checks().begin(), linops_checks().end(), o.check) == linops_checks().end())
      throw std::invalid_argument("unknown check '" + o.check + "'");
    if (o.h != "identity" && o.h != "random" && o.h != "trivial")
      throw std::invalid_argument("--h must be identity, random or trivial");
    if (o.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (o.tol) require_positive("tol", *o.tol);
    const Domain d = make_domain(o.domain, o.n);
    const auto& pts = d.ctx.points();
    auto field = [&](int trial) -> SymTensorField {
      if (o.h == "identity") return d.metric();
      if (o.h == "trivial") return trivial_kernel(d, o.seed + static_cast<std::uint64_t>(trial));
      return random_field(d, o.seed + static_cast<std::uint64_t>(trial));
    };
    const int trials = o.h == "identity" ? 1 : o.trials;
    const bool euclid = d.name.rfind("euclidean", 0) == 0;

    Json body;
    bool pass = false;
    double tol = 0.0;
    std::ostringstream s;
    if (o.check == "ric-prime") {
      tol = o.tol.value_or(1e-6);
      double worst = 0.0, sup = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto h = field(t);
        for (const auto& x : pts) {
          worst = std::max(worst, lin_ricci_vs_fd(d.ctx, h, x).mixed());
          sup = std::max(sup, max_abs(lin_ricci(d.ctx, h, x)));
        }
      }
      body["fd_error"] = worst;
      body["sup_ric_prime"] = sup;
      pass = worst < tol && (o.h != "identity" || sup < 1e-10);
      s << "FD mismatch " << num(worst) << ", sup |Ric'(h)| " << num(sup);
    } else if (o.check == "lin-boundary") {
      tol = o.tol.value_or(1e-5);
      const auto sigma = d.boundary();
      const auto nodes = make_grid(d, 2).faces.at(0).nodes;
      double ea = 0.0, eh = 0.0, tr = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto h = field(t);
        for (const auto& u : nodes) {
          const auto b = lin_boundary_vs_fd(sigma, h, u);
          ea = std::max(ea, b.A_prime.mixed());
          eh = std::max(eh, b.H_prime.mixed());
          tr = std::max(tr, std::abs(trace_identity_residual(sigma, h, u)));
        }
      }
      body["A_prime_fd_error"] = ea;
      body["H_prime_fd_error"] = eh;
      body["trace_identity"] = tr;
      pass = ea < tol && eh < tol && tr < 1e-8;
      s << "A' FD mismatch " << num(ea) << ", H' FD mismatch " << num(eh) << ", tr A' - H' - A.h^T " << num(tr);
    } else if (o.check == "laplace0") {
      tol = o.tol.value_or(1e-7);
      double worst = 0.0;
      for (int t = 0; t < o.trials; ++t) {
        const auto x = random_vector_field(d, o.seed + static_cast<std::uint64_t>(t));
        for (const auto& p : pts) {
          const auto ginv = values(local_geometry(d.metric(), p, 0).ginv);
          worst = std::max(worst, norm(laplace0_residual(d.ctx, x, p), ginv));
        }
      }
      body["residual"] = worst;
      pass = worst < tol;
      s << "sup |beta(D X) + (Delta X + Ric(X))/2| = " << num(worst);
    } else if (o.check == "adjoint-div") {
      tol = o.tol.value_or(euclid ? 1e-7 : 1e-6);
      double worst = 0.0;
      for (int t = 0; t < o.trials; ++t) {
        const auto seed = o.seed + static_cast<std::uint64_t>(t);
        // L_X g based fields on Schwarzschild only carry two derivatives
        const auto gamma = d.kind == DomainKind::schwarzschild ? random_chart_field(d, seed) : random_field(d, seed);
        worst = std::max(worst, adjoint_divergence_residual(d.ctx, gamma, pts));
      }
      body["residual"] = worst;
      pass = worst < tol;
      s << "sup |Div((Ric')^* gamma - (n-1) Lambda gamma)| = " << num(worst);
    } else if (o.check == "dilation") {
      tol = o.tol.value_or(1e-8);
      if (!euclid) throw DomainError("dilation check needs a Euclidean background");
      const auto nodes = make_grid(d, 3).faces.at(0).nodes;
      DilationResiduals worst;
      for (int t = 0; t < trials; ++t) {
        const auto r = dilation_scaling_check(d.ctx, field(t), o.t, nodes);
        worst.ricci = std::max(worst.ricci, r.ricci);
        worst.traceless = std::max(worst.traceless, r.traceless);
        worst.mean_curv = std::max(worst.mean_curv, r.mean_curv);
      }
      body["t"] = o.t;
      body["ricci"] = worst.ricci;
      body["traceless"] = worst.traceless;
      body["mean_curv"] = worst.mean_curv;
      pass = worst.ricci < tol && worst.traceless < tol && worst.mean_curv < tol;
      s << "Ric' " << num(worst.ricci) << ", traceless " << num(worst.traceless) << ", H' " << num(worst.mean_curv);
    } else {  // recombination
      tol = o.tol.value_or(1e-9);
      double worst = 0.0;
      for (int t = 0; t < trials; ++t) {
        const auto h = field(t);
        for (const auto& x : pts) worst = std::max(worst, operator_P_checked(d.ctx, h, x).discrepancy);
      }
      body["discrepancy"] = worst;
      pass = worst < tol;
      s << "P vs -K + tr K g / 2: " << num(worst);
    }

    RunMeta meta;
    meta.command = "linops";
    meta.seed = o.seed;
    meta.config["check"] = o.check;
    meta.config["domain"] = o.domain;
    meta.config["n"] = d.n;
    meta.config["h"] = o.h;
    meta.config["t"] = o.t;
    meta.config["trials"] = o.trials;
    meta.tolerances["tol"] = tol;
    Json doc = header(meta);
    doc["points"] = pts.size();
    doc["result"] = body;
    doc["pass"] = pass;
    const auto path =
        output_path(o.out_dir, o.out.empty() ? "linops-" + o.check + "-" + o.domain + ".json" : o.out);
    write_text(path, doc.dump(2) + "\n");
    out << o.check << " on " << o.domain << " (h = " << o.h << ")\n" << s.str() << '\n';
    out << verdict(pass) << "  (report: " << path.string() << ")\n";
    return static_cast<int>(pass ? kPass : kInconsistent);
  });
}

}  // namespace einlab::cli
