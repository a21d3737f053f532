#include "suslov/sim.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "suslov/errors.hpp"

namespace suslov {

namespace fs = std::filesystem;

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kMidpoint: return "midpoint";
    case Method::kVariational: return "variational";
    case Method::kRk4: return "rk4";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "midpoint") return Method::kMidpoint;
  if (name == "variational") return Method::kVariational;
  if (name == "rk4") return Method::kRk4;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" +
                      std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string buf(text);
  std::replace(buf.begin(), buf.end(), ',', ' ');
  std::istringstream in(buf);
  std::string tok;
  while (in >> tok) out.push_back(parse_number(key, tok));
  return out;
}

bool parse_flag(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config: '" + std::string(key) + "' expects a boolean");
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "inertia") {
    const auto v = parse_numbers(key, value);
    if (v.size() != 9) throw ConfigError("config: 'inertia' needs 9 numbers (row-major)");
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = v[static_cast<std::size_t>(3 * r + c)];
    try {
      cfg.inertia = InertiaTensor(m);
    } catch (const DegenerateError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "omega0") {
    const auto v = parse_numbers(key, value);
    if (v.size() != 3) throw ConfigError("config: 'omega0' needs 3 numbers");
    cfg.omega0 = Vec3(v[0], v[1], v[2]);
  } else if (key == "eps") {
    cfg.eps = parse_number(key, value);
  } else if (key == "t_final") {
    cfg.t_final = parse_number(key, value);
  } else if (key == "method") {
    const auto m = parse_method(value);
    if (!m) throw ConfigError("config: unknown method '" + std::string(value) + "'");
    cfg.method = *m;
  } else if (key == "output") {
    if (value.empty()) throw ConfigError("config: empty 'output'");
    cfg.output = std::string(value);
  } else if (key == "emit_plots") {
    cfg.emit_plots = parse_flag(key, value);
  } else if (key == "eps_min") {
    cfg.eps_min = parse_number(key, value);
  } else if (key == "eps_max") {
    cfg.eps_max = parse_number(key, value);
  } else if (key == "eps_count") {
    const double n = parse_number(key, value);
    if (n != std::floor(n) || n < 0 || n > 1e6) throw ConfigError("config: bad 'eps_count'");
    cfg.eps_count = static_cast<int>(n);
  } else if (key == "newton_tol") {
    cfg.newton.tol = parse_number(key, value);
  } else if (key == "newton_max_iter") {
    const double n = parse_number(key, value);
    if (n != std::floor(n) || n < 1 || n > 1e6) throw ConfigError("config: bad 'newton_max_iter'");
    cfg.newton.max_iter = static_cast<int>(n);
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw ConfigError("config: eps must be positive");
  if (!(t_final >= eps)) throw ConfigError("config: t_final must be >= eps");
  if (!omega0.allFinite() || std::abs(omega0.z()) > kConstraintTol) {
    throw ConfigError("config: omega0 must satisfy omega0_3 = 0");
  }
  if (!(eps_min > 0.0) || !(eps_max > eps_min)) {
    throw ConfigError("config: need 0 < eps_min < eps_max");
  }
  if (eps_count < kMinFitSamples) throw ConfigError("config: eps_count must be >= 5");
  if (!(newton.tol > 0.0) || newton.max_iter < 1) {
    throw ConfigError("config: invalid Newton settings");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  return parse_config(in);
}

long step_count(double eps, double t_final) {
  const double q = t_final / eps;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) return static_cast<long>(nearest);
  return static_cast<long>(std::floor(q));
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string> kTrajectoryColumns = {
    "t", "omega1", "omega2", "omega3", "lambda", "energy",
    "reduced_residual", "unreduced_residual", "orthonormality_defect",
    "R11", "R12", "R13", "R21", "R22", "R23", "R31", "R32", "R33"};

std::string csv_header(std::string_view prefix) {
  std::string out;
  for (std::size_t i = 0; i < kTrajectoryColumns.size(); ++i) {
    if (i) out += ',';
    out += prefix;
    out += kTrajectoryColumns[i];
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<double> row_values(const TrajectoryRow& row) {
  std::vector<double> v{row.t, row.omega.x(), row.omega.y(), row.omega.z(),
                        row.lambda, row.energy, row.reduced_residual,
                        row.unreduced_residual, row.orthonormality_defect};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) v.push_back(row.rotation(r, c));
  return v;
}

}  // namespace

void write_csv_row(std::ostream& out, const TrajectoryRow& row, bool newline) {
  const auto v = row_values(row);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_double(v[i]);
  }
  if (newline) out << '\n';
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

TrajectoryRow make_row(const InertiaTensor& inertia, double t, const Vec3& w,
                       double lambda, const Rot3& r) {
  const auto a = ConstraintCovector::canonical();
  TrajectoryRow row;
  row.t = t;
  row.omega = w;
  row.lambda = lambda;
  row.energy = reduced_energy(inertia, w);
  row.reduced_residual = std::abs(a.vector().dot(w));
  row.unreduced_residual = std::abs(unreduced_constraint_residual(r, w, a));
  row.orthonormality_defect = r.defect();
  row.rotation = r.matrix();
  return row;
}

}  // namespace

void simulate(const RunConfig& cfg, const std::function<void(const TrajectoryRow&)>& sink) {
  cfg.validate();
  const long n = step_count(cfg.eps, cfg.t_final);
  const InertiaTensor& inertia = cfg.inertia;

  std::unique_ptr<DrepsScheme> scheme;
  if (cfg.method != Method::kRk4) scheme = make_scheme(method_name(cfg.method), inertia);

  SuslovState state;
  state.omega = cfg.omega0;
  sink(make_row(inertia, 0.0, state.omega, suslov_multiplier(inertia, state.omega),
                state.rotation));
  for (long k = 0; k < n; ++k) {
    double lambda = 0.0;
    try {
      if (scheme) {
        DrepsStep step = dreps_step(*scheme, state, cfg.eps, cfg.newton);
        state = std::move(step.state);
        lambda = step.lambda;
      } else {
        state.rotation = reconstruct_step(state.rotation, state.omega, cfg.eps);
        state.omega = rk4_step(inertia, state.omega, cfg.eps);
        lambda = suslov_multiplier(inertia, state.omega);
      }
    } catch (const SolverError& e) {
      throw SolverError("step " + std::to_string(k + 1) + ": " + e.what(), k + 1);
    }
    // Time from the step index, not by accumulation.
    state.time = static_cast<double>(k + 1) * cfg.eps;
    sink(make_row(inertia, state.time, state.omega, lambda, state.rotation));
  }
}

std::vector<TrajectoryRow> simulate(const RunConfig& cfg) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(static_cast<std::size_t>(step_count(cfg.eps, cfg.t_final)) + 1);
  simulate(cfg, [&](const TrajectoryRow& r) { rows.push_back(r); });
  return rows;
}

long run_to_csv(const RunConfig& cfg) {
  cfg.validate();
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw Error("cannot write " + cfg.output);
  out << csv_header() << '\n';
  long rows = 0;
  simulate(cfg, [&](const TrajectoryRow& r) {
    write_csv_row(out, r);
    ++rows;
  });
  out.flush();
  if (!out) throw Error("write failed: " + cfg.output);
  return rows;
}

// ---------------------------------------------------------------------------
// Comparison

MethodSummary summarize(const InertiaTensor& inertia, Method method,
                        const std::vector<TrajectoryRow>& rows) {
  MethodSummary s;
  s.method = std::string(method_name(method));
  if (rows.empty()) return s;
  const double e0 = rows.front().energy;
  for (const TrajectoryRow& r : rows) {
    s.max_energy_error = std::max(s.max_energy_error, std::abs(r.energy - e0));
    s.max_reduced_residual = std::max(s.max_reduced_residual, r.reduced_residual);
    s.max_unreduced_residual = std::max(s.max_unreduced_residual, r.unreduced_residual);
    s.max_lambda_discrepancy = std::max(
        s.max_lambda_discrepancy, std::abs(r.lambda - suslov_multiplier(inertia, r.omega)));
    s.max_orthonormality_defect =
        std::max(s.max_orthonormality_defect, r.orthonormality_defect);
  }
  return s;
}

CompareResult compare(const RunConfig& a, const RunConfig& b) {
  if (!(a.inertia == b.inertia) || a.omega0 != b.omega0 || a.eps != b.eps ||
      a.t_final != b.t_final) {
    throw ConfigError("compare: configurations must share inertia, omega0, eps and t_final");
  }
  CompareResult out;
  out.rows_a = simulate(a);
  out.rows_b = simulate(b);
  out.a = summarize(a.inertia, a.method, out.rows_a);
  out.b = summarize(b.inertia, b.method, out.rows_b);
  for (std::size_t i = 0; i < out.rows_a.size(); ++i) {
    out.max_omega_difference = std::max(
        out.max_omega_difference, (out.rows_a[i].omega - out.rows_b[i].omega).norm());
  }
  return out;
}

void write_compare_csv(std::ostream& out, const CompareResult& result) {
  out << "t";
  for (const char* prefix : {"a_", "b_"}) {
    for (std::size_t i = 1; i < kTrajectoryColumns.size(); ++i) {
      out << ',' << prefix << kTrajectoryColumns[i];
    }
  }
  out << '\n';
  for (std::size_t k = 0; k < result.rows_a.size(); ++k) {
    const auto va = row_values(result.rows_a[k]);
    const auto vb = row_values(result.rows_b[k]);
    out << format_double(va[0]);
    for (std::size_t i = 1; i < va.size(); ++i) out << ',' << format_double(va[i]);
    for (std::size_t i = 1; i < vb.size(); ++i) out << ',' << format_double(vb[i]);
    out << '\n';
  }
}

void write_compare_summary(std::ostream& out, const CompareResult& result) {
  out << "label,method,max_energy_error,max_reduced_residual,max_unreduced_residual,"
         "max_lambda_discrepancy,max_orthonormality_defect\n";
  for (const auto& [label, s] : {std::pair{"a", &result.a}, std::pair{"b", &result.b}}) {
    out << label << ',' << s->method << ',' << format_double(s->max_energy_error) << ','
        << format_double(s->max_reduced_residual) << ','
        << format_double(s->max_unreduced_residual) << ','
        << format_double(s->max_lambda_discrepancy) << ','
        << format_double(s->max_orthonormality_defect) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Consistency study

ConsistencyReport consistency_study(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::kRk4) {
    throw ConfigError("consistency: method must be midpoint or variational");
  }
  const auto scheme = make_scheme(method_name(cfg.method), cfg.inertia);
  const auto grid =
      log_spaced_grid(std::log10(cfg.eps_min), std::log10(cfg.eps_max), cfg.eps_count);
  return estimate_order(*scheme, cfg.omega0, grid, Rot3::identity(), true, cfg.newton);
}

std::vector<SlopeCheck> check_report(const RunConfig& cfg, const ConsistencyReport& report) {
  const auto scheme = make_scheme(report.scheme, cfg.inertia);
  if (!scheme) throw ConfigError("check_report: unknown scheme " + report.scheme);
  const ExpectedSlopes want = expected_slopes(*scheme);
  auto slope = [](std::string q, double got, double expected) {
    return SlopeCheck{std::move(q), got, expected, kSlopeTolerance, false,
                      std::abs(got - expected) <= kSlopeTolerance};
  };
  std::vector<SlopeCheck> out;
  out.push_back(slope("omega_slope", report.omega.slope, want.omega));
  if (want.lambda) {
    out.push_back(slope("lambda_slope", report.lambda.slope, *want.lambda));
  } else {
    const double offset = std::abs(inconsistency_offset(cfg.inertia, cfg.omega0));
    const double got = report.lambda_offset.offset;
    out.push_back(SlopeCheck{"lambda_offset", got, offset, 0.05, true,
                             std::abs(got - offset) <= 0.05 * offset});
  }
  out.push_back(slope("group_slope", report.group.slope, want.group));
  out.push_back(slope("velocity_slope", report.velocity.slope, want.velocity));
  return out;
}

void write_report_csv(std::ostream& out, const ConsistencyReport& report) {
  out << "eps,err_omega,err_lambda,err_group,err_velocity\n";
  for (const ErrorSample& s : report.samples) {
    out << format_double(s.eps) << ',' << format_double(s.err_omega) << ','
        << format_double(s.err_lambda) << ',' << format_double(s.err_group) << ','
        << format_double(s.err_velocity) << '\n';
  }
}

void write_fits_csv(std::ostream& out, const std::vector<SlopeCheck>& checks,
                    const ConsistencyReport& report) {
  out << "quantity,slope,intercept,fit_residual\n";
  const std::pair<const char*, const LogLogFit*> fits[] = {
      {"omega", &report.omega}, {"lambda", &report.lambda},
      {"group", &report.group}, {"velocity", &report.velocity}};
  for (const auto& [name, fit] : fits) {
    out << name << ',' << format_double(fit->slope) << ',' << format_double(fit->intercept)
        << ',' << format_double(fit->residual) << '\n';
  }
  out << "lambda_offset," << format_double(report.lambda_offset.coefficient) << ','
      << format_double(report.lambda_offset.offset) << ','
      << format_double(report.lambda_offset.residual) << '\n';
  out << "\ncheck,measured,expected,tolerance,relative,pass\n";
  for (const SlopeCheck& c : checks) {
    out << c.quantity << ',' << format_double(c.measured) << ','
        << format_double(c.expected) << ',' << format_double(c.tolerance) << ','
        << (c.relative ? 1 : 0) << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

void write_report_table(std::ostream& out, const ConsistencyReport& report,
                        const std::vector<SlopeCheck>& checks) {
  out << "scheme: " << report.scheme << "\n\n";
  out << std::setw(12) << "eps" << std::setw(14) << "err_omega" << std::setw(14)
      << "err_lambda" << std::setw(14) << "err_group" << std::setw(14) << "err_velocity"
      << '\n';
  out << std::scientific << std::setprecision(4);
  for (const ErrorSample& s : report.samples) {
    out << std::setw(12) << s.eps << std::setw(14) << s.err_omega << std::setw(14)
        << s.err_lambda << std::setw(14) << s.err_group << std::setw(14) << s.err_velocity
        << '\n';
  }
  out << std::fixed << std::setprecision(4) << "\nslopes: omega " << report.omega.slope
      << "  lambda " << report.lambda.slope << "  group " << report.group.slope
      << "  velocity " << report.velocity.slope << '\n';
  out << std::scientific << std::setprecision(6)
      << "lambda constant term (err = c0 + c1 eps): c0 = " << report.lambda_offset.offset
      << '\n';
  out << '\n';
  for (const SlopeCheck& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.quantity << ": measured " << c.measured
        << ", expected " << c.expected << (c.relative ? " +/- rel " : " +/- ")
        << c.tolerance << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

// ---------------------------------------------------------------------------
// Plot scripts

fs::path sibling_path(const fs::path& p, std::string_view suffix) {
  fs::path out = p.parent_path() / (p.stem().string() + std::string(suffix));
  out += p.extension();
  return out;
}

namespace {

void require_trajectory_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("plot-scripts: cannot open " + p.string());
  std::string header;
  std::string first;
  if (!std::getline(in, header) || header != csv_header()) {
    throw Error("plot-scripts: " + p.string() + " is not a trajectory CSV");
  }
  if (!std::getline(in, first) || trim(first).empty()) {
    throw Error("plot-scripts: " + p.string() + " has no data rows");
  }
}

std::string quoted(const fs::path& p) {
  std::string s = p.string();
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}

struct Series {
  std::string file;
  std::string title;
  std::string style;
};

void panel(std::ostream& out, std::string_view title, std::string_view ylabel,
           const std::vector<Series>& series, const std::vector<std::string>& columns) {
  out << "set title '" << title << "'\nset ylabel '" << ylabel << "'\nplot ";
  bool first = true;
  for (const Series& s : series) {
    for (const std::string& col : columns) {
      if (!first) out << ", \\\n     ";
      first = false;
      out << s.file << " using 't':'" << col << "' " << s.style << " title '" << s.title
          << (columns.size() > 1 ? " " + col : std::string()) << "'";
    }
  }
  out << "\n\n";
}

void preamble(std::ostream& out, std::string_view png, int rows, int cols) {
  out << "# gnuplot script; columns are addressed by CSV header name.\n"
      << "set datafile separator comma\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size " << 600 * cols << "," << 420 * rows << "\n"
      << "set output '" << png << "'\n"
      << "set xlabel 't'\n"
      << "set multiplot layout " << rows << "," << cols << "\n\n";
}

}  // namespace

std::vector<fs::path> emit_plot_scripts(const PlotRequest& req) {
  require_trajectory_csv(req.primary);
  if (req.reference) require_trajectory_csv(*req.reference);
  if (req.variational) require_trajectory_csv(*req.variational);

  const std::string points = "with points pt 7 ps 0.4";
  Series primary{quoted(req.primary), "scheme", points + " lc rgb 'blue'"};
  std::vector<Series> dyn{primary};
  std::optional<Series> reference;
  std::optional<Series> variational;
  if (req.reference) {
    reference = Series{quoted(*req.reference), "RK4", "with lines lw 2 lc rgb 'red'"};
    dyn.push_back(*reference);
  }
  if (req.variational) {
    variational = Series{quoted(*req.variational), "variational", points + " lc rgb 'dark-green'"};
  }

  std::ostringstream fig1;
  preamble(fig1, "figure1.png", 3, 2);
  panel(fig1, "(a) omega_1", "omega_1", dyn, {"omega1"});
  panel(fig1, "(b) omega_2", "omega_2", dyn, {"omega2"});
  panel(fig1, "(c) lambda", "lambda", dyn, {"lambda"});
  {
    std::vector<Series> mult;
    mult.push_back(variational ? *variational : primary);
    if (reference) mult.push_back(*reference);
    panel(fig1, "(d) variational multipliers", "lambda", mult, {"lambda"});
  }
  panel(fig1, "(e) constraints", "residual", {primary},
        {"reduced_residual", "unreduced_residual"});
  panel(fig1, "(f) energy", "E_l", {primary}, {"energy"});
  fig1 << "unset multiplot\n";

  std::ostringstream fig2;
  preamble(fig2, "figure2.png", 3, 2);
  std::vector<Series> cmp{primary};
  if (variational) cmp.push_back(*variational);
  if (reference) cmp.push_back(*reference);
  panel(fig2, "(a) omega_1", "omega_1", cmp, {"omega1"});
  panel(fig2, "(b) omega_2", "omega_2", cmp, {"omega2"});
  panel(fig2, "(c) lambda", "lambda", cmp, {"lambda"});
  panel(fig2, "(d) energy", "E_l", cmp, {"energy"});
  panel(fig2, "(e) constraints", "residual", {variational ? *variational : primary},
        {"reduced_residual", "unreduced_residual"});
  fig2 << "unset multiplot\n";

  std::error_code ec;
  fs::create_directories(req.out_dir, ec);
  if (ec) throw Error("plot-scripts: cannot create " + req.out_dir.string());
  std::vector<fs::path> written;
  for (const auto& [name, text] :
       {std::pair{"figure1.gp", fig1.str()}, std::pair{"figure2.gp", fig2.str()}}) {
    const fs::path p = req.out_dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out || !(out << text)) throw Error("plot-scripts: cannot write " + p.string());
    written.push_back(p);
  }
  return written;
}

}  // namespace suslov
