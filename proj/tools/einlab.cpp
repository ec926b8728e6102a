#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "einlab/green.hpp"
#include "einlab/quadrature.hpp"
#include "einlab/version.hpp"
#include "report.hpp"

using namespace einlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"einlab: numerical checks for Einstein metrics with conformal boundary data"};
  app.set_version_flag("--version", std::string(einlab::kVersion));
  app.require_subcommand(1);

  app.set_config("--config", "", "INI file with one [subcommand] section of key = value pairs");
  app.allow_config_extras(CLI::config_extras_mode::error);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")
      ->envname("EINLAB_THREADS")
      ->check(CLI::NonNegativeNumber);

  auto add_common = [&](CLI::App* sub, std::string& dir) {
    sub->fallthrough();
    sub->add_option("--out-dir", dir, "directory for output files")->envname("EINLAB_OUTPUT_DIR");
    sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")
        ->envname("EINLAB_THREADS")
        ->check(CLI::NonNegativeNumber);
  };

  SchwarzschildOptions so;
  auto* sw = app.add_subcommand("schwarzschild", "classify Sigma_s along a sweep of s");
  sw->add_option("--n", so.n, "dimension")->capture_default_str();
  sw->add_option("--lambda", so.lambda, "cosmological constant")->capture_default_str();
  sw->add_option("--m", so.m, "mass parameter")->capture_default_str();
  sw->add_option("--s", so.s, "s values, a:b:step or a single value (default spans [r0, r1))");
  sw->add_option("--band", so.band, "degeneracy band for the second eigenvalue")->capture_default_str();
  sw->add_option("--csv", so.csv, "CSV file name")->capture_default_str();
  sw->add_option("--svg", so.svg, "SVG file name")->capture_default_str();
  sw->add_option("--seed", so.seed, "recorded in outputs; the sweep is deterministic")->capture_default_str();
  add_common(sw, so.out_dir);

  GreenOptions go;
  double green_tol = 0.0;
  auto* gr = app.add_subcommand("green", "Green identity, kernel and quadrature checks on a domain");
  gr->add_option("--domain", go.domain, "test domain")
      ->check(CLI::IsMember(einlab::domain_names()))
      ->capture_default_str();
  gr->add_option("--n", go.n, "dimension (0 = domain default)")->capture_default_str();
  gr->add_option("--levels", go.levels, "refinement levels");
  gr->add_option("--seed", go.seed, "field seed")->capture_default_str();
  gr->add_option("--check", go.check, "which check")->check(CLI::IsMember(green_checks()))->capture_default_str();
  gr->add_option("--b", go.b, "constant in H' = b")->capture_default_str();
  auto* gtol = gr->add_option("--tol", green_tol, "pass tolerance");
  gr->add_option("--min-order", go.min_order, "required convergence order")->capture_default_str();
  gr->add_option("--out", go.out, "output file name");
  add_common(gr, go.out_dir);

  LinopsOptions lo;
  double lin_tol = 0.0;
  auto* li = app.add_subcommand("linops", "pointwise checks of the linearized operators");
  li->set_help_flag("--help", "print this help message and exit");
  li->add_option("--check", lo.check, "which check")->check(CLI::IsMember(linops_checks()))->capture_default_str();
  li->add_option("--domain", lo.domain, "background")
      ->check(CLI::IsMember(einlab::domain_names()))
      ->capture_default_str();
  li->add_option("--n", lo.n, "dimension (0 = domain default)")->capture_default_str();
  li->add_option("--h", lo.h, "perturbation")
      ->check(CLI::IsMember({"identity", "random", "trivial"}))
      ->capture_default_str();
  li->add_option("--t", lo.t, "dilation parameter in (0, 1)")->capture_default_str();
  li->add_option("--trials", lo.trials, "random fields per check")->capture_default_str();
  li->add_option("--seed", lo.seed, "field seed")->capture_default_str();
  auto* ltol = li->add_option("--tol", lin_tol, "pass tolerance");
  li->add_option("--out", lo.out, "output file name");
  add_common(li, lo.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kUsage);
  }

  einlab::set_thread_count(threads);
  if (*sw) return cmd_schwarzschild(so, std::cout, std::cerr);
  if (*gr) {
    if (*gtol) go.tol = green_tol;
    return cmd_green(go, std::cout, std::cerr);
  }
  if (*ltol) lo.tol = lin_tol;
  return cmd_linops(lo, std::cout, std::cerr);
}
