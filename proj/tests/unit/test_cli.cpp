#include "shockcontract/cli/cli.hpp"
#include "shockcontract/cli/output.hpp"
#include "shockcontract/cli/run_config.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace shockcontract;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "shockcontract");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("shockcontract_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(RunConfig, ParsesAllBlocks) {
  const auto c = cli::parse_run_config(R"({
    "version": 1, "system": "example3x3", "params": {"alpha": 1},
    "state": [0, 0, 0], "family": 2, "s": 0.05, "C": 1,
    "C_scan": {"lo": -2, "hi": 4, "count": 7}, "s_list": [0.01, 0.005],
    "sim": {"cells": 200, "initial": "corollary", "corollary_t": 0.01, "direction": "1,0,0"},
    "seed": 3, "jobs": 2
  })");
  cli::validate(c);
  EXPECT_EQ(c.system->name, "example3x3");
  EXPECT_EQ(c.require_family(), Family{2});
  EXPECT_EQ(c.C_scan->points().size(), 7u);
  EXPECT_DOUBLE_EQ(c.C_scan->points().back(), 4.0);
  EXPECT_EQ(c.sim->cells, 200);
  EXPECT_EQ(c.seed, 3u);
}

TEST(RunConfig, DiagnosticsNameLineOrField) {
  try {
    (void)cli::parse_run_config("{\n\"version\": 1,\n\"s\": }");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  try {
    (void)cli::parse_run_config(R"({"version": 1, "sim": {"cfl": "fast"}})");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sim.cfl"), std::string::npos) << e.what();
  }
  EXPECT_THROW((void)cli::parse_run_config(R"({"state": [1]})"), Error);               // no version
  EXPECT_THROW((void)cli::parse_run_config(R"({"version": 1, "colour": 1})"), Error);  // unknown field
  auto c = cli::parse_run_config(R"({"version": 1, "system": "burgers", "state": [1, 2]})");
  EXPECT_THROW(cli::validate(c), Error);
  c = cli::parse_run_config(R"({"version": 1, "s_list": [0.01, 0.02, 0.005]})");
  EXPECT_THROW(cli::validate(c), Error);
}

TEST(Output, FormattingRoundTripsAndTablesCarryMetadata) {
  EXPECT_EQ(cli::fmt(0.1), "0.1");
  EXPECT_EQ(std::stod(cli::fmt(1.0 / 3.0)), 1.0 / 3.0);
  cli::Table t({"a", "b"});
  t.meta("system", "burgers()");
  t.row(std::vector<double>{1.0, 2.5});
  EXPECT_EQ(t.str(), "# system: burgers()\na,b\n1,2.5\n");
  EXPECT_THROW(t.row(std::vector<double>{1.0}), Error);
}

TEST(Output, ParallelForKeepsOrderAndRethrows) {
  std::vector<int> v(50, 0);
  cli::parallel_for(v.size(), 4, [&](std::size_t k) { v[k] = static_cast<int>(k * k); });
  for (std::size_t k = 0; k < v.size(); ++k) EXPECT_EQ(v[k], static_cast<int>(k * k));
  EXPECT_THROW(cli::parallel_for(10, 3, [](std::size_t k) { if (k == 7) throw Error(ErrorKind::BadParameter, "x"); }),
               Error);
}

TEST(Output, JobsFromEnvironment) {
  ::setenv("SHOCKCONTRACT_JOBS", "3", 1);
  EXPECT_EQ(cli::resolve_jobs(0), 3);
  EXPECT_EQ(cli::resolve_jobs(5), 5);
  ::setenv("SHOCKCONTRACT_JOBS", "zero", 1);
  EXPECT_THROW((void)cli::resolve_jobs(0), Error);
  ::unsetenv("SHOCKCONTRACT_JOBS");
  EXPECT_EQ(cli::resolve_jobs(0), 1);
}

TEST(Dispatch, EigenListsMhdSpeeds) {
  const auto r = call({"eigen", "--system", "mhd2d", "--beta", "1", "--gamma", "1.6667", "--state", "1,1,0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("family,lambda,kind,g"), std::string::npos);
  EXPECT_NE(r.out.find("\n4,"), std::string::npos);
}

TEST(Dispatch, CriterionScanReportsInterval) {
  const auto r = call({"criterion", "--system", "example3x3", "--alpha", "1", "--family", "2", "--state", "0,0,0", "--scan"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# feasible: yes"), std::string::npos);
  EXPECT_NE(r.out.find("C,lambda_max"), std::string::npos);
}

TEST(Dispatch, VerdictFailureExitsWithTwo) {
  EXPECT_EQ(call({"criterion", "--system", "example3x3", "--alpha", "3.9", "--family", "2", "--state", "0,0,0", "--C", "1"}).code, 2);
  EXPECT_EQ(call({"criterion", "--system", "mhd2d", "--family", "2", "--state", "100,1,0,0", "--scan"}).code, 2);
}

TEST(Dispatch, ErrorsExitWithOne) {
  EXPECT_EQ(call({"eigen", "--system", "nope", "--state", "1"}).code, 1);
  EXPECT_EQ(call({"eigen", "--system", "p_system", "--state", "-1,0"}).code, 1);
  EXPECT_EQ(call({"dmax", "--system", "burgers", "--state", "1", "--family", "1"}).code, 1);  // missing s
  EXPECT_EQ(call({"simulate", "--system", "burgers"}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
}

TEST(Dispatch, ReproducePaperAllPass) {
  const auto r = call({"reproduce-paper", "--jobs", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Dispatch, SimulateWritesDeterministicFiles) {
  const fs::path dir = scratch("sim");
  const fs::path cfg = dir / "sim.json";
  std::ofstream(cfg) << R"({"version": 1, "system": "example3x3", "params": {"alpha": 1},
    "state": [0, 0, 0], "family": 2, "s": 0.05, "C": 1,
    "sim": {"cells": 200, "x_lo": -3, "x_hi": 3, "t_end": 0.2, "initial": "corollary",
            "corollary_t": 0.01, "direction": [1, 0, 0], "snapshot_times": [0.1]}})";
  const auto a = call({"simulate", "--config", cfg.string(), "--out", (dir / "a").string()});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = call({"simulate", "--config", cfg.string(), "--out", (dir / "b").string(), "--jobs", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  for (const char* name : {"simulate.csv", "snapshot_000.csv"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / name)) << name;
    EXPECT_EQ(slurp(dir / "a" / name), slurp(dir / "b" / name)) << name;
  }
  EXPECT_FALSE(fs::exists(dir / "a" / "simulate.csv.tmp"));
  const std::string csv = slurp(dir / "a" / "simulate.csv");
  EXPECT_NE(csv.find("t,E,h,dE_dt,dist_minus,dist_plus,d_rh_traces"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Dispatch, DmaxSweepIsSeeded) {
  const std::vector<std::string> args{"dmax", "--system", "example3x3", "--alpha", "1", "--state", "0,0,0", "--family",
                                      "2", "--s", "0.05", "--C", "1", "--samples", "4", "--seed", "9"};
  auto with_jobs = args;
  with_jobs.insert(with_jobs.end(), {"--jobs", "2"});
  const auto a = call(args);
  const auto b = call(with_jobs);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
