#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "suslov/errors.hpp"
#include "suslov/sim.hpp"

namespace fs = std::filesystem;

namespace suslov {
namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("suslov_sim_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig short_run(Method m, double eps, double t_final) {
  RunConfig cfg;
  cfg.method = m;
  cfg.eps = eps;
  cfg.t_final = t_final;
  return cfg;
}

TEST(Config, DefaultFileEncodesExperiment) {
  const RunConfig cfg = load_config(SUSLOV_DEFAULT_CONFIG);
  EXPECT_EQ(cfg.inertia.matrix(), InertiaTensor::reference().matrix());
  EXPECT_EQ(cfg.omega0, Vec3(0.4, 0.5, 0.0));
  EXPECT_EQ(cfg.eps, 1e-3);
  EXPECT_EQ(cfg.method, Method::kMidpoint);
}

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in(
      "# comment\n"
      "inertia = 2 0 0  0 3 0  0 0 4\n"
      "omega0 = 0.1, 0.2, 0   # trailing\n"
      "eps = 0.01\n"
      "t_final = 2\n"
      "method = variational\n"
      "output = run.csv\n"
      "emit_plots = true\n"
      "eps_count = 6\n"
      "newton_tol = 1e-12\n");
  const RunConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.inertia.matrix()(1, 1), 3.0);
  EXPECT_EQ(cfg.omega0, Vec3(0.1, 0.2, 0.0));
  EXPECT_EQ(cfg.eps, 0.01);
  EXPECT_EQ(cfg.t_final, 2.0);
  EXPECT_EQ(cfg.method, Method::kVariational);
  EXPECT_EQ(cfg.output, "run.csv");
  EXPECT_TRUE(cfg.emit_plots);
  EXPECT_EQ(cfg.eps_count, 6);
  EXPECT_EQ(cfg.newton.tol, 1e-12);
}

TEST(Config, Errors) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    parse_config(in).validate();
  };
  EXPECT_THROW(parse("eps = -1\n"), ConfigError);
  EXPECT_THROW(parse("eps = abc\n"), ConfigError);
  EXPECT_THROW(parse("method = euler\n"), ConfigError);
  EXPECT_THROW(parse("inertia = 1 2 3\n"), ConfigError);
  EXPECT_THROW(parse("omega0 = 0.1 0.2 0.3\n"), ConfigError);
  EXPECT_THROW(parse("colour = red\n"), ConfigError);
  EXPECT_THROW(parse("just words\n"), ConfigError);
  EXPECT_THROW(parse("eps = 1\nt_final = 0.5\n"), ConfigError);
  EXPECT_THROW(parse("inertia = 1 1 0 1 1 0 0 0 1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/suslov.cfg"), ConfigError);
}

TEST(StepCount, SnapsToInteger) {
  EXPECT_EQ(step_count(1e-3, 10.0), 10000);
  EXPECT_EQ(step_count(0.1, 0.3), 3);
  EXPECT_EQ(step_count(0.4, 1.0), 2);
  EXPECT_EQ(step_count(1.0, 100.0), 100);
}

TEST(Csv, HeaderIsFixed) {
  EXPECT_EQ(csv_header(),
            "t,omega1,omega2,omega3,lambda,energy,reduced_residual,unreduced_residual,"
            "orthonormality_defect,R11,R12,R13,R21,R22,R23,R31,R32,R33");
  EXPECT_EQ(kTrajectoryColumns.size(), 18u);
}

TEST(Csv, FullPrecisionRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Run, RowCountAndFile) {
  const fs::path dir = scratch_dir("rows");
  RunConfig cfg = short_run(Method::kMidpoint, 1e-2, 1.0);
  cfg.output = (dir / "traj.csv").string();
  EXPECT_EQ(run_to_csv(cfg), 101);
  const std::string text = slurp(cfg.output);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 102);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header());
}

TEST(Run, DeterministicCsv) {
  const fs::path dir = scratch_dir("det");
  for (Method m : {Method::kMidpoint, Method::kVariational, Method::kRk4}) {
    RunConfig cfg = short_run(m, 1e-2, 2.0);
    cfg.output = (dir / "a.csv").string();
    run_to_csv(cfg);
    cfg.output = (dir / "b.csv").string();
    run_to_csv(cfg);
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  }
}

TEST(Run, ZeroVelocityGivesConstantColumns) {
  for (Method m : {Method::kMidpoint, Method::kVariational, Method::kRk4}) {
    RunConfig cfg = short_run(m, 0.1, 2.0);
    cfg.omega0 = Vec3::Zero();
    for (const TrajectoryRow& r : simulate(cfg)) {
      EXPECT_EQ(r.omega, Vec3::Zero());
      EXPECT_EQ(r.lambda, 0.0);
      EXPECT_EQ(r.energy, 0.0);
      EXPECT_EQ(r.rotation, Mat3::Identity());
    }
  }
}

TEST(Run, Rk4ConservesEnergy) {
  const auto rows = simulate(short_run(Method::kRk4, 1e-3, 10.0));
  ASSERT_EQ(rows.size(), 10001u);
  const double e0 = rows.front().energy;
  EXPECT_NEAR(e0, 0.225, 1e-15);
  for (const auto& r : rows) EXPECT_NEAR(r.energy, e0, 1e-8);
}

TEST(Run, VariationalEnergyBoundedAtUnitStep) {
  const auto rows = simulate(short_run(Method::kVariational, 1.0, 100.0));
  ASSERT_EQ(rows.size(), 101u);
  const double e0 = rows.front().energy;
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.energy - e0));
  EXPECT_LT(worst, 0.1 * e0);
  // second half no worse than a small multiple of the first: no secular growth
  double first = 0.0, second = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double& bucket = k < rows.size() / 2 ? first : second;
    bucket = std::max(bucket, std::abs(rows[k].energy - e0));
  }
  EXPECT_LE(second, 2.0 * first);
}

TEST(Run, SolverErrorCarriesStep) {
  RunConfig cfg = short_run(Method::kVariational, 0.5, 2.0);
  cfg.omega0 = Vec3(20.0, -30.0, 0.0);
  cfg.newton.max_iter = 1;
  try {
    simulate(cfg);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(Compare, IdenticalConfigsGiveIdenticalColumns) {
  const RunConfig a = short_run(Method::kMidpoint, 1e-2, 1.0);
  const CompareResult r = compare(a, a);
  EXPECT_EQ(r.max_omega_difference, 0.0);
  std::ostringstream csv;
  write_compare_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header.substr(0, 12), "t,a_omega1,a");
  while (std::getline(lines, row)) {
    std::vector<std::string> cells;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 35u);
    for (std::size_t i = 1; i <= 17; ++i) EXPECT_EQ(cells[i], cells[i + 17]);
  }
}

TEST(Compare, MidpointTracksRk4AtSmallStep) {
  const CompareResult r = compare(short_run(Method::kMidpoint, 1e-3, 1.0),
                                  short_run(Method::kRk4, 1e-3, 1.0));
  EXPECT_LE(r.max_omega_difference, 1e-6);
  std::ostringstream s;
  write_compare_summary(s, r);
  EXPECT_NE(s.str().find("a,midpoint,"), std::string::npos);
  EXPECT_NE(s.str().find("b,rk4,"), std::string::npos);
}

TEST(Compare, RequiresSharedData) {
  RunConfig a = short_run(Method::kMidpoint, 1e-2, 1.0);
  RunConfig b = short_run(Method::kRk4, 2e-2, 1.0);
  EXPECT_THROW(compare(a, b), ConfigError);
}

TEST(Compare, SummaryMeasuresMultiplierDiscrepancy) {
  const CompareResult r = compare(short_run(Method::kMidpoint, 1e-2, 1.0),
                                  short_run(Method::kVariational, 1e-2, 1.0));
  EXPECT_LE(r.a.max_lambda_discrepancy, 1e-16);
  EXPECT_GT(r.b.max_lambda_discrepancy, 1e-3);
  EXPECT_EQ(r.a.max_reduced_residual, 0.0);
  EXPECT_EQ(r.b.max_reduced_residual, 0.0);
}

TEST(Consistency, StudyChecksPass) {
  for (Method m : {Method::kMidpoint, Method::kVariational}) {
    RunConfig cfg;
    cfg.method = m;
    const ConsistencyReport report = consistency_study(cfg);
    const auto checks = check_report(cfg, report);
    ASSERT_EQ(checks.size(), 4u);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.quantity << " " << c.measured;
    std::ostringstream csv;
    write_report_csv(csv, report);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
              "eps,err_omega,err_lambda,err_group,err_velocity");
  }
  RunConfig rk;
  rk.method = Method::kRk4;
  EXPECT_THROW(consistency_study(rk), ConfigError);
}

TEST(PlotScripts, SixAndFivePanels) {
  const fs::path dir = scratch_dir("plots");
  RunConfig cfg = short_run(Method::kMidpoint, 0.1, 1.0);
  cfg.output = (dir / "mid.csv").string();
  run_to_csv(cfg);
  PlotRequest req;
  req.primary = cfg.output;
  req.out_dir = dir / "scripts";
  const auto files = emit_plot_scripts(req);
  ASSERT_EQ(files.size(), 2u);
  const std::string f1 = slurp(req.out_dir / "figure1.gp");
  const std::string f2 = slurp(req.out_dir / "figure2.gp");
  auto count = [](const std::string& s, const std::string& what) {
    std::size_t n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count(f1, "set title"), 6u);
  EXPECT_EQ(count(f2, "set title"), 5u);
  for (const char* col : {"'omega1'", "'omega2'", "'lambda'", "'energy'", "'reduced_residual'",
                          "'unreduced_residual'"}) {
    EXPECT_NE(f1.find(col), std::string::npos) << col;
  }
}

TEST(PlotScripts, EmptyTrajectoryWritesNothing) {
  const fs::path dir = scratch_dir("empty");
  {
    std::ofstream(dir / "empty.csv") << csv_header() << '\n';
  }
  PlotRequest req;
  req.primary = dir / "empty.csv";
  req.out_dir = dir / "scripts";
  EXPECT_THROW(emit_plot_scripts(req), Error);
  EXPECT_FALSE(fs::exists(req.out_dir / "figure1.gp"));
  EXPECT_FALSE(fs::exists(req.out_dir / "figure2.gp"));
}

TEST(Paths, Sibling) {
  EXPECT_EQ(sibling_path("out/run.csv", "_fits"), fs::path("out/run_fits.csv"));
  EXPECT_EQ(sibling_path("run", "_summary"), fs::path("run_summary"));
}

}  // namespace
}  // namespace suslov
