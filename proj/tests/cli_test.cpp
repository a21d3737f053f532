#include <gtest/gtest.h>

#ifdef SUSLOV_HAVE_CLI

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "suslov/cli.hpp"

namespace fs = std::filesystem;

namespace suslov::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "suslov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("suslov_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(Cli, RunWritesCsv) {
  const fs::path d = scratch("run");
  const auto r = invoke({"run", "--config", SUSLOV_DEFAULT_CONFIG, "--t-final", "0.1",
                         "--out", (d / "t.csv").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(d / "t.csv"));
  EXPECT_NE(r.out.find("wrote 101 rows"), std::string::npos);
}

TEST(Cli, RunEmitPlots) {
  const fs::path d = scratch("plots");
  const auto r = invoke({"run", "--eps", "0.1", "--t-final", "1", "--out",
                         (d / "t.csv").string(), "--emit-plots"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(d / "figure1.gp"));
  EXPECT_TRUE(fs::exists(d / "figure2.gp"));
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(invoke({"run", "--eps", "-1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"run", "--method", "euler"}).code, kExitConfig);
  EXPECT_EQ(invoke({"run", "--config", "/nonexistent.cfg"}).code, kExitConfig);
  EXPECT_EQ(invoke({"bogus"}).code, kExitConfig);
  EXPECT_EQ(invoke({}).code, kExitConfig);
  EXPECT_EQ(invoke({"consistency", "--method", "rk4"}).code, kExitConfig);
}

TEST(Cli, SolverErrorExitsThreeWithStep) {
  const fs::path d = scratch("solver");
  {
    std::ofstream cfg(d / "bad.cfg");
    cfg << "omega0 = 20 -30 0\neps = 0.5\nt_final = 2\nmethod = variational\n"
           "newton_max_iter = 1\n";
  }
  const auto r = invoke({"run", "--config", (d / "bad.cfg").string(), "--out",
                         (d / "t.csv").string()});
  EXPECT_EQ(r.code, kExitSolver);
  EXPECT_NE(r.err.find("at step 1"), std::string::npos) << r.err;
}

TEST(Cli, FitErrorExitsFour) {
  const fs::path d = scratch("fit");
  {
    std::ofstream cfg(d / "zero.cfg");
    cfg << "omega0 = 0 0 0\n";
  }
  const auto r = invoke({"consistency", "--config", (d / "zero.cfg").string(), "--out",
                         (d / "c.csv").string()});
  EXPECT_EQ(r.code, kExitFit) << r.err;
}

TEST(Cli, ConsistencyAssertPassesAndWritesFits) {
  const fs::path d = scratch("cons");
  const auto r = invoke({"consistency", "--method", "variational", "--assert", "--out",
                         (d / "c.csv").string()});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_TRUE(fs::exists(d / "c.csv"));
  EXPECT_TRUE(fs::exists(d / "c_fits.csv"));
  EXPECT_NE(r.out.find("PASS lambda_offset"), std::string::npos);
}

TEST(Cli, ConsistencyAssertFailsOutsideAsymptoticRegime) {
  // eps |w| close to 1: the fitted orders drift away from their limits
  const fs::path d = scratch("cons_fail");
  {
    std::ofstream cfg(d / "fast.cfg");
    cfg << "omega0 = 8 10 0\n";
  }
  const auto r = invoke({"consistency", "--config", (d / "fast.cfg").string(), "--assert",
                         "--eps-min", "0.01", "--eps-max", "0.1", "--out",
                         (d / "c.csv").string()});
  EXPECT_EQ(r.code, kExitFailure) << r.out << r.err;
  EXPECT_NE(r.out.find("FAIL omega_slope"), std::string::npos);
}

TEST(Cli, CompareWritesMergedCsvAndSummary) {
  const fs::path d = scratch("cmp");
  const auto r = invoke({"compare", "--method", "midpoint", "--method-b", "rk4", "--eps",
                         "1e-3", "--t-final", "1", "--out", (d / "m.csv").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(d / "m.csv"));
  EXPECT_TRUE(fs::exists(d / "m_summary.csv"));
}

TEST(Cli, PlotScriptsRejectsMissingCsv) {
  const fs::path d = scratch("plot_missing");
  const auto r = invoke({"plot-scripts", "--csv", (d / "nope.csv").string(), "--out",
                         (d / "s").string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_FALSE(fs::exists(d / "s" / "figure1.gp"));
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace suslov::cli

#endif
