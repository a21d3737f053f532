// One-step error measurement and log-log order estimation for DREPS schemes.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suslov/dreps.hpp"

namespace suslov {

struct ErrorSample {
  double eps = 0.0;
  double err_omega = 0.0;     // |w_ref - w_1|
  double err_lambda = 0.0;    // |lambda_ref - lambda_1|
  double err_group = 0.0;     // group_distance(R_ref, R_1)
  double err_velocity = 0.0;  // |R_ref hat(w_ref) - R_1 hat(w_1)|
};

// Least-squares line log(err) = intercept + slope * log(eps).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit residuals in log space
};

// Least-squares line err = offset + coefficient * eps.
struct OffsetFit {
  double offset = 0.0;
  double coefficient = 0.0;
  double residual = 0.0;
};

struct ConsistencyReport {
  std::string scheme;
  std::vector<ErrorSample> samples;
  LogLogFit omega;
  LogLogFit lambda;
  LogLogFit group;
  LogLogFit velocity;
  OffsetFit lambda_offset;
};

// Slopes a scheme is expected to show; lambda is empty for schemes whose
// multiplier is not consistent.
struct ExpectedSlopes {
  double omega;
  std::optional<double> lambda;
  double group;
  double velocity;
};
ExpectedSlopes expected_slopes(const DrepsScheme& scheme);

inline constexpr double kSlopeTolerance = 0.15;
inline constexpr double kMinMeasurableError = 1e-15;
inline constexpr int kMinFitSamples = 5;

// 10^lo ... 10^hi, `count` points evenly spaced in log10.
std::vector<double> log_spaced_grid(double log10_min = -3.5,
                                    double log10_max = -1.5, int count = 8);

ErrorSample one_step_errors(const DrepsScheme& scheme, const Vec3& w0,
                            const Rot3& r0, double eps,
                            const NewtonConfig& cfg = {});

LogLogFit fit_log_log(const std::vector<double>& eps,
                      const std::vector<double>& err);
OffsetFit fit_offset(const std::vector<double>& eps,
                     const std::vector<double>& err);

// Samples every eps of the grid (concurrently when `parallel`) and fits each
// error quantity. Throws FitError for fewer than 5 samples or any error below
// 1e-15.
ConsistencyReport estimate_order(const DrepsScheme& scheme, const Vec3& w0,
                                 const std::vector<double>& eps_grid,
                                 const Rot3& r0 = Rot3::identity(),
                                 bool parallel = true,
                                 const NewtonConfig& cfg = {});

}  // namespace suslov
