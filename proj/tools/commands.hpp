#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace einlab::cli {

struct SchwarzschildOptions {
  int n = 4;
  double lambda = 0.0;
  double m = 1.0;
  std::string s;  // "a:b:step" or a single value; empty picks a default range
  double band = 1e-10;
  std::string out_dir = ".";
  std::string csv = "schwarzschild.csv";
  std::string svg = "schwarzschild.svg";
  std::uint64_t seed = 0;
};

struct GreenOptions {
  std::string domain = "euclidean-annulus";
  int n = 0;
  std::vector<int> levels;  // empty picks a default by dimension
  std::uint64_t seed = 7;
  std::string check = "green";
  double b = 0.0;
  std::optional<double> tol;
  double min_order = 2.0;
  std::string out_dir = ".";
  std::string out;  // empty: green-<domain>-<check>.json
};

struct LinopsOptions {
  std::string check = "ric-prime";
  std::string domain = "euclidean-ball";
  int n = 0;
  std::string h = "random";  // identity | random | trivial
  double t = 0.25;
  int trials = 5;
  std::uint64_t seed = 7;
  std::optional<double> tol;
  std::string out_dir = ".";
  std::string out;  // empty: linops-<check>-<domain>.json
};

/// Each returns an exit code: 0 pass, 1 usage or parameter error, 2 failed
/// check or internal inconsistency.
int cmd_schwarzschild(const SchwarzschildOptions& o, std::ostream& out, std::ostream& err);
int cmd_green(const GreenOptions& o, std::ostream& out, std::ostream& err);
int cmd_linops(const LinopsOptions& o, std::ostream& out, std::ostream& err);

/// Parses "a:b:step" (inclusive) or a single number.
std::vector<double> parse_range(const std::string& spec);

const std::vector<std::string>& green_checks();
const std::vector<std::string>& linops_checks();

}  // namespace einlab::cli
