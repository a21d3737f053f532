// Trajectory runs, method comparison, consistency studies and plot-script
// emission behind the `suslov` command-line tool.
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "suslov/consistency.hpp"

namespace suslov {

enum class Method { kMidpoint, kVariational, kRk4 };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct RunConfig {
  InertiaTensor inertia = InertiaTensor::reference();
  Vec3 omega0 = Vec3(0.4, 0.5, 0.0);
  double eps = 1e-3;
  double t_final = 10.0;
  Method method = Method::kMidpoint;
  std::string output = "trajectory.csv";
  bool emit_plots = false;
  // Consistency-study step grid, log-spaced between eps_min and eps_max.
  double eps_min = 3.1622776601683794e-4;  // 10^-3.5
  double eps_max = 3.1622776601683791e-2;  // 10^-1.5
  int eps_count = 8;
  NewtonConfig newton;

  // Throws ConfigError.
  void validate() const;
};

// Applies one `key = value` setting; throws ConfigError for unknown keys and
// malformed values. Keys: inertia (9 numbers, row-major), omega0 (3 numbers),
// eps, t_final, method, output, emit_plots, eps_min, eps_max, eps_count,
// newton_tol, newton_max_iter.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Flat key-value text: one `key = value` per line, `#` starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

// floor(t_final / eps), snapping quotients within 1e-9 of an integer.
long step_count(double eps, double t_final);

struct TrajectoryRow {
  double t = 0.0;
  Vec3 omega = Vec3::Zero();
  double lambda = 0.0;
  double energy = 0.0;
  double reduced_residual = 0.0;    // |<a, w>|
  double unreduced_residual = 0.0;  // |a . (R^T R) w|
  double orthonormality_defect = 0.0;
  Mat3 rotation = Mat3::Identity();
};

// Fixed CSV header, one column per TrajectoryRow field (rotation row-major).
extern const std::vector<std::string> kTrajectoryColumns;

std::string csv_header(std::string_view prefix = "");
void write_csv_row(std::ostream& out, const TrajectoryRow& row, bool newline = true);
std::string format_double(double v);

// Steps the configured method from (R0 = I, omega0). Row count is
// step_count(eps, t_final) + 1. Solver failures are rethrown as SolverError
// carrying the failing step index.
void simulate(const RunConfig& cfg,
              const std::function<void(const TrajectoryRow&)>& sink);
std::vector<TrajectoryRow> simulate(const RunConfig& cfg);

// simulate() streamed into a CSV file at cfg.output. Returns the row count.
long run_to_csv(const RunConfig& cfg);

struct MethodSummary {
  std::string method;
  double max_energy_error = 0.0;
  double max_reduced_residual = 0.0;
  double max_unreduced_residual = 0.0;
  // max_k |lambda_k - lambda(w_k)|: scheme multiplier against the continuous
  // multiplier at the same velocity.
  double max_lambda_discrepancy = 0.0;
  double max_orthonormality_defect = 0.0;
};

MethodSummary summarize(const InertiaTensor& inertia, Method method,
                        const std::vector<TrajectoryRow>& rows);

struct CompareResult {
  std::vector<TrajectoryRow> rows_a;
  std::vector<TrajectoryRow> rows_b;
  MethodSummary a;
  MethodSummary b;
  double max_omega_difference = 0.0;
};

// Both configs must share inertia, omega0, eps and t_final (ConfigError).
CompareResult compare(const RunConfig& a, const RunConfig& b);
// Merged CSV: t, then a_<column> and b_<column> for every non-time column.
void write_compare_csv(std::ostream& out, const CompareResult& result);
void write_compare_summary(std::ostream& out, const CompareResult& result);

struct SlopeCheck {
  std::string quantity;
  double measured;
  double expected;
  double tolerance;
  bool relative;  // tolerance is relative to `expected`
  bool pass;
};

ConsistencyReport consistency_study(const RunConfig& cfg);
std::vector<SlopeCheck> check_report(const RunConfig& cfg,
                                     const ConsistencyReport& report);
void write_report_csv(std::ostream& out, const ConsistencyReport& report);
void write_fits_csv(std::ostream& out, const std::vector<SlopeCheck>& checks,
                    const ConsistencyReport& report);
void write_report_table(std::ostream& out, const ConsistencyReport& report,
                        const std::vector<SlopeCheck>& checks);

struct PlotRequest {
  std::filesystem::path primary;                   // e.g. a midpoint run
  std::optional<std::filesystem::path> reference;  // RK4 run
  std::optional<std::filesystem::path> variational;
  std::filesystem::path out_dir;
};

// Writes figure1.gp (six panels) and figure2.gp (five panels), gnuplot
// scripts that address CSV columns by header name. Every input must be a
// trajectory CSV with at least one data row; otherwise Error is thrown and
// nothing is written.
std::vector<std::filesystem::path> emit_plot_scripts(const PlotRequest& req);

// Path next to `p` with `suffix` inserted before the extension.
std::filesystem::path sibling_path(const std::filesystem::path& p,
                                   std::string_view suffix);

}  // namespace suslov
