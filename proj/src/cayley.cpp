#include "suslov/cayley.hpp"

#include <cmath>
#include <sstream>

#include "suslov/errors.hpp"

namespace suslov {

namespace {
constexpr double kChartBoundaryTol = 1e-10;
constexpr double kConstrainedTol = 1e-12;
}  // namespace

Rot3 cay(const Vec3& w) {
  const Mat3 w_hat = hat(w).matrix();
  const double scale = 1.0 / (1.0 + 0.25 * w.squaredNorm());
  return Rot3(Mat3::Identity() + scale * (w_hat + 0.5 * w_hat * w_hat));
}

Vec3 cay_inv(const Rot3& r) {
  const Mat3& m = r.matrix();
  if (std::abs(m.trace() + 1.0) < kChartBoundaryTol) {
    throw DomainError("cay_inv: rotation by pi lies on the Cayley chart boundary");
  }
  const Mat3 id = Mat3::Identity();
  // (R + I) is invertible away from the chart boundary.
  const Mat3 w_full = 2.0 * (m - id) * (m + id).inverse();
  const Mat3 skew = 0.5 * (w_full - w_full.transpose());
  const Vec3 w(skew(2, 1), skew(0, 2), skew(1, 0));

  const double residual = entrywise_norm(cay(w).matrix() - m);
  const double limit = 1e-9 * (1.0 + w.squaredNorm());
  if (!(residual <= limit)) {
    std::ostringstream msg;
    msg << "cay_inv: reconstruction residual " << residual << " exceeds " << limit;
    throw DomainError(msg.str());
  }
  return w;
}

Mat3 dcay(const Vec3& w) {
  const double scale = 1.0 / (1.0 + 0.25 * w.squaredNorm());
  return scale * (Mat3::Identity() + 0.5 * hat(w).matrix());
}

Mat3 dcay_inv(const Vec3& w) {
  return Mat3::Identity() - 0.5 * hat(w).matrix() + 0.25 * w * w.transpose();
}

Mat3 dcay_inv_scaled(const Vec3& w, double eps) {
  if (std::abs(w.z()) > kConstrainedTol) {
    std::ostringstream msg;
    msg << "dcay_inv_scaled: w_3 = " << w.z() << " is not on the constrained subspace";
    throw ConstraintError(msg.str());
  }
  const double w1 = w.x();
  const double w2 = w.y();
  const double e2 = eps * eps / 4.0;
  Mat3 m;
  m << 1.0 + e2 * w1 * w1, e2 * w1 * w2, -0.5 * eps * w2,
       e2 * w1 * w2, 1.0 + e2 * w2 * w2, 0.5 * eps * w1,
       0.5 * eps * w2, -0.5 * eps * w1, 0.0;
  return m;
}

}  // namespace suslov
