#include "suslov/so3.hpp"

#include <cmath>
#include <sstream>

#include "suslov/errors.hpp"

namespace suslov {

Mat3 Skew3::matrix() const {
  Mat3 s;
  s << 0.0, -axial_.z(), axial_.y(),
       axial_.z(), 0.0, -axial_.x(),
       -axial_.y(), axial_.x(), 0.0;
  return s;
}

Rot3::Rot3(const Mat3& m, double tol) : m_(m) {
  if (!m.allFinite()) throw DomainError("Rot3: non-finite entries");
  const double d = orthonormality_defect(m);
  if (!(d <= tol)) {
    std::ostringstream msg;
    msg << "Rot3: orthonormality defect " << d << " exceeds " << tol;
    throw DomainError(msg.str());
  }
}

double Rot3::defect() const { return orthonormality_defect(m_); }

Skew3 hat(const Vec3& v) { return Skew3(v); }

Vec3 vee(const Skew3& s) { return s.axial(); }

Vec3 vee(const Mat3& s) {
  const double asym = (s + s.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSkewTol)) {
    std::ostringstream msg;
    msg << "vee: matrix is not skew (asymmetry " << asym << ")";
    throw DomainError(msg.str());
  }
  // Average the mirrored entries so that round-off is split evenly.
  return Vec3(0.5 * (s(2, 1) - s(1, 2)), 0.5 * (s(0, 2) - s(2, 0)),
              0.5 * (s(1, 0) - s(0, 1)));
}

double killing_inner(const Vec3& a, const Vec3& b) {
  return -0.5 * (hat(a).matrix() * hat(b).matrix()).trace();
}

double algebra_distance(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return std::sqrt(killing_inner(d, d));
}

double entrywise_norm(const Mat3& m) { return std::sqrt(m.cwiseAbs2().sum()); }

double group_distance(const Mat3& a, const Mat3& b) {
  return entrywise_norm(Mat3::Identity() - a.transpose() * b);
}

double orthonormality_defect(const Mat3& a) { return group_distance(a, a); }

Mat3 group_velocity(const Mat3& r, const Vec3& w) {
  return r * hat(w).matrix();
}

}  // namespace suslov
