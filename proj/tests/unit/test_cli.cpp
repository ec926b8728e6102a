#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "einlab/quadrature.hpp"
#include "report.hpp"

using namespace einlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("einlab-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseRange, InclusiveEndpoints) {
  const auto v = parse_range("2:8:0.1");
  EXPECT_EQ(v.size(), 61u);
  EXPECT_DOUBLE_EQ(v.front(), 2.0);
  EXPECT_NEAR(v.back(), 8.0, 1e-12);
  EXPECT_EQ(parse_range("3.5").size(), 1u);
  EXPECT_THROW(parse_range("1:2"), std::invalid_argument);
  EXPECT_THROW(parse_range("1:x:0.1"), std::invalid_argument);
  EXPECT_THROW(parse_range("2:1:0.1"), std::invalid_argument);
}

TEST(Num, ShortestRoundTrip) {
  EXPECT_EQ(num(0.1), "0.1");
  EXPECT_EQ(num(2.0), "2");
  EXPECT_EQ(num(1.0 / 0.0), "inf");
}

TEST(Schwarzschild, SweepAllNondegenerate) {
  const auto dir = scratch_dir("sweep");
  SchwarzschildOptions o;
  o.s = "2:8:0.1";
  o.out_dir = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kPass) << err.str();
  const auto csv = slurp(dir / "schwarzschild.csv");
  EXPECT_EQ(csv.find(",degenerate"), std::string::npos);
  EXPECT_NE(csv.find("\"version\""), std::string::npos);
  EXPECT_NE(slurp(dir / "schwarzschild.svg").find("<svg"), std::string::npos);
  EXPECT_NE(out.str().find("61 rows: 61 nondegenerate"), std::string::npos);
}

TEST(Schwarzschild, ExitCodes) {
  const auto dir = scratch_dir("codes");
  std::ostringstream out, err;
  SchwarzschildOptions o;
  o.out_dir = dir.string();
  o.lambda = 0.05;
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kUsage);
  EXPECT_NE(err.str().find("Lambda"), std::string::npos);
  o.lambda = 0.0;
  o.s = "1.5";
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kUsage);
  o.s = "2";
  o.n = 3;
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kUsage);
  o.n = 4;
  o.band = -1;
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kUsage);
  o.band = 1e-10;
  EXPECT_EQ(cmd_schwarzschild(o, out, err), kPass);
  EXPECT_NE(out.str().find("p = 4"), std::string::npos);
}

TEST(Schwarzschild, OutputIndependentOfThreads) {
  const auto d1 = scratch_dir("t1"), d3 = scratch_dir("t3");
  SchwarzschildOptions o;
  o.lambda = -0.4;
  std::ostringstream out, err;
  einlab::set_thread_count(1);
  o.out_dir = d1.string();
  ASSERT_EQ(cmd_schwarzschild(o, out, err), kPass);
  einlab::set_thread_count(3);
  o.out_dir = d3.string();
  ASSERT_EQ(cmd_schwarzschild(o, out, err), kPass);
  einlab::set_thread_count(0);
  EXPECT_EQ(slurp(d1 / "schwarzschild.csv"), slurp(d3 / "schwarzschild.csv"));
  EXPECT_EQ(slurp(d1 / "schwarzschild.svg"), slurp(d3 / "schwarzschild.svg"));
}

TEST(Green, ChecksPassAndWriteReports) {
  const auto dir = scratch_dir("green");
  std::ostringstream out, err;
  GreenOptions o;
  o.out_dir = dir.string();
  o.domain = "hyperbolic-ball";
  o.levels = {4};
  for (const char* c : {"zero-mean", "hidden-bc", "lbar", "trivial-kernel", "quadratic-form"}) {
    o.check = c;
    EXPECT_EQ(cmd_green(o, out, err), kPass) << c << '\n' << out.str() << err.str();
    EXPECT_TRUE(fs::exists(dir / ("green-hyperbolic-ball-" + std::string(c) + ".json")));
  }
  o.domain = "euclidean-ball";
  o.levels = {4};
  o.check = "example-2.2";
  EXPECT_EQ(cmd_green(o, out, err), kPass);
  EXPECT_NE(out.str().find("nontrivial kernel"), std::string::npos);
}

TEST(Green, UnderResolvedRefinementFails) {
  const auto dir = scratch_dir("green-fail");
  std::ostringstream out, err;
  GreenOptions o;
  o.out_dir = dir.string();
  o.levels = {2, 3};
  EXPECT_EQ(cmd_green(o, out, err), kInconsistent);
  o.check = "example-2.2";
  o.domain = "euclidean-annulus";
  EXPECT_EQ(cmd_green(o, out, err), kUsage);
  o.check = "no-such-check";
  EXPECT_EQ(cmd_green(o, out, err), kUsage);
}

TEST(Green, ReportIndependentOfThreads) {
  const auto dir = scratch_dir("green-threads");
  std::ostringstream out, err;
  GreenOptions o;
  o.out_dir = dir.string();
  o.levels = {3};
  o.check = "adjoint";
  o.domain = "euclidean-ball";
  einlab::set_thread_count(1);
  o.out = "a.json";
  cmd_green(o, out, err);
  einlab::set_thread_count(4);
  o.out = "b.json";
  cmd_green(o, out, err);
  einlab::set_thread_count(0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(Linops, EveryCheckOnItsDefaults) {
  const auto dir = scratch_dir("linops");
  std::ostringstream out, err;
  LinopsOptions o;
  o.out_dir = dir.string();
  o.trials = 2;
  for (const auto& c : linops_checks()) {
    o.check = c;
    EXPECT_EQ(cmd_linops(o, out, err), kPass) << c << '\n' << out.str() << err.str();
  }
  o.check = "laplace0";
  o.domain = "schwarzschild";
  EXPECT_EQ(cmd_linops(o, out, err), kPass);
  o.check = "dilation";
  EXPECT_EQ(cmd_linops(o, out, err), kUsage);
  o.domain = "euclidean-ball";
  o.t = 1.5;
  EXPECT_EQ(cmd_linops(o, out, err), kUsage);
  o.h = "bogus";
  EXPECT_EQ(cmd_linops(o, out, err), kUsage);
}

TEST(Linops, IdentityPerturbationHasNoRicciVariation) {
  const auto dir = scratch_dir("linops-id");
  std::ostringstream out, err;
  LinopsOptions o;
  o.out_dir = dir.string();
  o.h = "identity";
  EXPECT_EQ(cmd_linops(o, out, err), kPass);
  const auto report = slurp(dir / "linops-ric-prime-euclidean-ball.json");
  EXPECT_NE(report.find("\"sup_ric_prime\""), std::string::npos);
}

TEST(Report, UnwritableOutputIsUsageError) {
  std::ostringstream out, err;
  LinopsOptions o;
  o.check = "laplace0";
  o.out_dir = "/proc/einlab-cannot-write";
  EXPECT_EQ(cmd_linops(o, out, err), kUsage);
}
