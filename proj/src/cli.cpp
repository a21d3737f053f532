#include "suslov/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "suslov/errors.hpp"
#include "suslov/sim.hpp"

namespace suslov::cli {

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::string> method;
  std::optional<double> eps;
  std::optional<double> t_final;
  std::optional<std::string> out;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "flat key = value configuration file");
  app->add_option("--method", o.method, "midpoint | variational | rk4");
  app->add_option("--eps", o.eps, "time step");
  app->add_option("--t-final", o.t_final, "final time");
  app->add_option("--out", o.out, "output path");
}

RunConfig resolve(const CommonOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.method) apply_setting(cfg, "method", *o.method);
  if (o.eps) cfg.eps = *o.eps;
  if (o.t_final) cfg.t_final = *o.t_final;
  if (o.out) apply_setting(cfg, "output", *o.out);
  cfg.validate();
  return cfg;
}

std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  return f;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving integrators for the Suslov rigid-body problem"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool emit_plots = false;
  auto* run = app.add_subcommand("run", "integrate one trajectory and write CSV");
  add_common(run, run_opts);
  run->add_flag("--emit-plots", emit_plots, "also write gnuplot scripts next to the CSV");

  CommonOptions cmp_opts;
  std::string method_b = "variational";
  std::string config_b;
  auto* cmp = app.add_subcommand("compare", "run two methods and write a merged CSV");
  add_common(cmp, cmp_opts);
  cmp->add_option("--method-b", method_b, "method of the second run");
  cmp->add_option("--config-b", config_b, "configuration of the second run");

  CommonOptions cons_opts;
  bool assert_slopes = false;
  std::optional<double> eps_min;
  std::optional<double> eps_max;
  std::optional<int> eps_count;
  auto* cons = app.add_subcommand("consistency", "one-step error study with log-log fits");
  add_common(cons, cons_opts);
  cons->add_flag("--assert", assert_slopes, "exit non-zero when a fitted order misses");
  cons->add_option("--eps-min", eps_min, "smallest step of the grid");
  cons->add_option("--eps-max", eps_max, "largest step of the grid");
  cons->add_option("--eps-count", eps_count, "number of log-spaced steps");

  PlotRequest plot_req;
  std::string plot_reference;
  std::string plot_variational;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plot-scripts", "write gnuplot scripts for trajectory CSVs");
  plot->add_option("--csv", plot_req.primary, "trajectory CSV of the scheme")->required();
  plot->add_option("--reference", plot_reference, "RK4 trajectory CSV");
  plot->add_option("--variational", plot_variational, "variational trajectory CSV");
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg = resolve(run_opts);
      cfg.emit_plots = cfg.emit_plots || emit_plots;
      const long rows = run_to_csv(cfg);
      out << "wrote " << rows << " rows to " << cfg.output << '\n';
      if (cfg.emit_plots) {
        PlotRequest req;
        req.primary = cfg.output;
        req.out_dir = std::filesystem::path(cfg.output).parent_path();
        if (req.out_dir.empty()) req.out_dir = ".";
        for (const auto& p : emit_plot_scripts(req)) out << "wrote " << p.string() << '\n';
      }
    } else if (cmp->parsed()) {
      RunConfig a = resolve(cmp_opts);
      RunConfig b = config_b.empty() ? a : load_config(config_b);
      if (!config_b.empty()) {
        if (cmp_opts.eps) b.eps = *cmp_opts.eps;
        if (cmp_opts.t_final) b.t_final = *cmp_opts.t_final;
      }
      apply_setting(b, "method", method_b);
      b.validate();
      const CompareResult result = compare(a, b);
      {
        auto f = open_output(a.output);
        write_compare_csv(f, result);
      }
      const auto summary_path = sibling_path(a.output, "_summary");
      {
        auto f = open_output(summary_path);
        write_compare_summary(f, result);
      }
      write_compare_summary(out, result);
      out << "max |omega_a - omega_b| = " << format_double(result.max_omega_difference)
          << '\n';
    } else if (cons->parsed()) {
      RunConfig cfg = resolve(cons_opts);
      if (eps_min) cfg.eps_min = *eps_min;
      if (eps_max) cfg.eps_max = *eps_max;
      if (eps_count) cfg.eps_count = *eps_count;
      cfg.validate();
      const ConsistencyReport report = consistency_study(cfg);
      const auto checks = check_report(cfg, report);
      {
        auto f = open_output(cfg.output);
        write_report_csv(f, report);
      }
      {
        auto f = open_output(sibling_path(cfg.output, "_fits"));
        write_fits_csv(f, checks, report);
      }
      write_report_table(out, report, checks);
      if (assert_slopes) {
        for (const auto& c : checks) {
          if (!c.pass) return kExitFailure;
        }
      }
    } else if (plot->parsed()) {
      if (!plot_reference.empty()) plot_req.reference = plot_reference;
      if (!plot_variational.empty()) plot_req.variational = plot_variational;
      plot_req.out_dir = plot_out;
      for (const auto& p : emit_plot_scripts(plot_req)) out << "wrote " << p.string() << '\n';
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "solver error";
    if (e.step() >= 0) err << " at step " << e.step();
    err << ": " << e.what() << '\n';
    return kExitSolver;
  } catch (const FitError& e) {
    err << "fit error: " << e.what() << '\n';
    return kExitFit;
  } catch (const ConstraintError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace suslov::cli
