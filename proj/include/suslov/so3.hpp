// Exact primitives on so(3) and SO(3).
//
// Vectors of R^3 are identified with skew matrices through the hat map, the
// Killing form on so(3) reduces to the Euclidean dot product, and distances
// on the group are measured with the entrywise Euclidean matrix norm
// |I - A^T B|. Nothing in this header re-orthonormalizes a matrix: drift from
// SO(3) is a quantity to be measured, not hidden.
#pragma once

#include <Eigen/Dense>

namespace suslov {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kDefaultOrthonormalityTol = 1e-10;
inline constexpr double kSkewTol = 1e-12;

// Element of so(3). Only the axial vector is stored, so S^T = -S holds by
// construction.
class Skew3 {
 public:
  Skew3() : axial_(Vec3::Zero()) {}
  explicit Skew3(const Vec3& axial) : axial_(axial) {}

  const Vec3& axial() const { return axial_; }
  Mat3 matrix() const;

  Skew3 operator*(double s) const { return Skew3(axial_ * s); }
  Skew3 operator+(const Skew3& o) const { return Skew3(axial_ + o.axial_); }
  Skew3 operator-(const Skew3& o) const { return Skew3(axial_ - o.axial_); }

 private:
  Vec3 axial_;
};

// Attitude matrix. Construction checks |I - R^T R| <= tol and throws
// DomainError otherwise; the stored matrix is never modified.
class Rot3 {
 public:
  Rot3() : m_(Mat3::Identity()) {}
  explicit Rot3(const Mat3& m, double tol = kDefaultOrthonormalityTol);

  static Rot3 identity() { return Rot3(); }

  const Mat3& matrix() const { return m_; }
  double defect() const;

  // Product of two attitudes; the result is checked with `tol`.
  Rot3 compose(const Rot3& other,
               double tol = kDefaultOrthonormalityTol) const {
    return Rot3(m_ * other.m_, tol);
  }

 private:
  Mat3 m_;
};

Skew3 hat(const Vec3& v);
Vec3 vee(const Skew3& s);
// Throws DomainError when the largest entry of |S + S^T| exceeds 1e-12.
Vec3 vee(const Mat3& s);

// -1/2 trace(hat(a) hat(b)).
double killing_inner(const Vec3& a, const Vec3& b);
double algebra_distance(const Vec3& a, const Vec3& b);

// Entrywise Euclidean norm sqrt(sum_ij M_ij^2).
double entrywise_norm(const Mat3& m);

// |I - A^T B|. B is allowed to be any 3x3 matrix.
double group_distance(const Mat3& a, const Mat3& b);
inline double group_distance(const Rot3& a, const Rot3& b) {
  return group_distance(a.matrix(), b.matrix());
}
inline double group_distance(const Rot3& a, const Mat3& b) {
  return group_distance(a.matrix(), b);
}

// |I - A^T A|, the self-distance of A.
double orthonormality_defect(const Mat3& a);

// Left-translated velocity R * hat(w), the tangent vector at R.
Mat3 group_velocity(const Mat3& r, const Vec3& w);

}  // namespace suslov
