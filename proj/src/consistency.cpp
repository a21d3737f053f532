#include "suslov/consistency.hpp"

#include <cmath>
#include <future>
#include <sstream>

#include "suslov/errors.hpp"

namespace suslov {

ExpectedSlopes expected_slopes(const DrepsScheme& scheme) {
  // Both schemes are second order in w; the group and velocity errors of the
  // Cayley reconstruction are capped at order 1 (slope 2) whenever dw/dt != 0.
  if (scheme.name() == "midpoint") return {3.0, 3.0, 2.0, 2.0};
  return {3.0, std::nullopt, 2.0, 2.0};
}

std::vector<double> log_spaced_grid(double log10_min, double log10_max, int count) {
  if (count < 2) throw DomainError("log_spaced_grid: need at least 2 points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::pow(10.0, log10_min + t * (log10_max - log10_min)));
  }
  return out;
}

ErrorSample one_step_errors(const DrepsScheme& scheme, const Vec3& w0,
                            const Rot3& r0, double eps, const NewtonConfig& cfg) {
  const ReferenceFlow ref = reference_flow(scheme.inertia(), w0, r0.matrix(), eps);

  SuslovState start;
  start.omega = w0;
  start.rotation = r0;
  const DrepsStep step = dreps_step(scheme, start, eps, cfg);
  const Mat3& r1 = step.state.rotation.matrix();

  ErrorSample s;
  s.eps = eps;
  // Compare increments from w0: both are small, so their difference carries
  // no round-off from the magnitude of w0.
  s.err_omega = (ref.omega_increment - step.omega_increment).norm();
  s.err_lambda = std::abs(ref.lambda_change - step.lambda_change);
  s.err_group = group_distance(ref.rotation, r1);
  s.err_velocity = entrywise_norm(group_velocity(ref.rotation, ref.omega) -
                                  group_velocity(r1, step.state.omega));
  return s;
}

LogLogFit fit_log_log(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size() || eps.size() < kMinFitSamples) {
    throw FitError("fit_log_log: need at least 5 (eps, err) pairs");
  }
  const auto n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixX2d a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(err[i] >= kMinMeasurableError) || !std::isfinite(err[i])) {
      std::ostringstream msg;
      msg << "fit_log_log: error " << err[i] << " at eps=" << eps[i]
          << " is below measurable precision";
      throw FitError(msg.str());
    }
    a(i, 0) = 1.0;
    a(i, 1) = std::log(eps[i]);
    b(i) = std::log(err[i]);
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  LogLogFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.residual = std::sqrt((a * coef - b).squaredNorm() / static_cast<double>(n));
  return fit;
}

OffsetFit fit_offset(const std::vector<double>& eps, const std::vector<double>& err) {
  if (eps.size() != err.size() || eps.size() < kMinFitSamples) {
    throw FitError("fit_offset: need at least 5 (eps, err) pairs");
  }
  const auto n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixX2d a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = eps[i];
    b(i) = err[i];
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  OffsetFit fit;
  fit.offset = coef(0);
  fit.coefficient = coef(1);
  fit.residual = std::sqrt((a * coef - b).squaredNorm() / static_cast<double>(n));
  return fit;
}

ConsistencyReport estimate_order(const DrepsScheme& scheme, const Vec3& w0,
                                 const std::vector<double>& eps_grid,
                                 const Rot3& r0, bool parallel,
                                 const NewtonConfig& cfg) {
  if (eps_grid.size() < kMinFitSamples) {
    throw FitError("estimate_order: need at least 5 step sizes");
  }
  ConsistencyReport report;
  report.scheme = std::string(scheme.name());
  report.samples.resize(eps_grid.size());

  if (parallel) {
    std::vector<std::future<ErrorSample>> pending;
    pending.reserve(eps_grid.size());
    for (double eps : eps_grid) {
      pending.push_back(std::async(std::launch::async, [&, eps] {
        return one_step_errors(scheme, w0, r0, eps, cfg);
      }));
    }
    for (std::size_t i = 0; i < pending.size(); ++i) report.samples[i] = pending[i].get();
  } else {
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      report.samples[i] = one_step_errors(scheme, w0, r0, eps_grid[i], cfg);
    }
  }

  std::vector<double> eps, e_omega, e_lambda, e_group, e_velocity;
  for (const ErrorSample& s : report.samples) {
    eps.push_back(s.eps);
    e_omega.push_back(s.err_omega);
    e_lambda.push_back(s.err_lambda);
    e_group.push_back(s.err_group);
    e_velocity.push_back(s.err_velocity);
  }
  report.omega = fit_log_log(eps, e_omega);
  report.lambda = fit_log_log(eps, e_lambda);
  report.group = fit_log_log(eps, e_group);
  report.velocity = fit_log_log(eps, e_velocity);
  report.lambda_offset = fit_offset(eps, e_lambda);
  return report;
}

}  // namespace suslov
