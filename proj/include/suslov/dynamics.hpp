// Continuous Suslov dynamics on SO(3).
//
// A rigid body with inertia tensor I rotates about its centre of mass under
// the nonholonomic constraint <a, w> = 0 on its body angular velocity w. With
// the canonical choice a = e3 the constraint is w_3 = 0, and the constrained
// Euler equations
//
//   I dw/dt = (I w) x w + lambda a
//
// split into a 2-dimensional ODE for (w_1, w_2) and an algebraic expression
// for the multiplier lambda. Both are implemented here in closed form, next
// to a general multiplier elimination (valid for any covector a) that serves
// as an independent cross-check.
#pragma once

#include <vector>

#include "suslov/so3.hpp"

namespace suslov {

// Constrained velocities must satisfy |<a, w>| <= kConstraintTol.
inline constexpr double kConstraintTol = 1e-12;

// Inertia tensor with its upper-left 2x2 block I_m cached. The tensor need not
// be symmetric, but I_m must be invertible.
class InertiaTensor {
 public:
  explicit InertiaTensor(const Mat3& m);

  // Tensor of the reference experiment:
  // [[1, 0.1, 0.2], [0.1, 1, 0.2], [0.2, 0.1, 1]].
  static InertiaTensor reference();

  const Mat3& matrix() const { return m_; }
  const Mat2& block() const { return block_; }
  double block_det() const { return block_det_; }
  // 0-based entry access.
  double operator()(int r, int c) const { return m_(r, c); }

  bool operator==(const InertiaTensor& o) const { return m_ == o.m_; }

 private:
  Mat3 m_;
  Mat2 block_;
  double block_det_;
};

// Constraint direction in the dual algebra, normalized to unit length.
class ConstraintCovector {
 public:
  explicit ConstraintCovector(const Vec3& a);
  static ConstraintCovector canonical() { return ConstraintCovector(Vec3::UnitZ()); }
  const Vec3& vector() const { return a_; }

 private:
  Vec3 a_;
};

struct SuslovState {
  Vec3 omega = Vec3::Zero();
  Rot3 rotation;
  double time = 0.0;
};

// Throws ConstraintError when |w_3| > kConstraintTol.
void require_constrained(const Vec3& w, const char* where);

// l(w) = 1/2 <I w, w>.
double reduced_lagrangian(const InertiaTensor& inertia, const Vec3& w);
// dl/dw = 1/2 (I + I^T) w.
Vec3 reduced_lagrangian_gradient(const InertiaTensor& inertia, const Vec3& w);
// Legendre value <dl/dw, w> - l, which equals 1/2 <I w, w> for this l.
double reduced_energy(const InertiaTensor& inertia, const Vec3& w);

// (dw_1/dt, dw_2/dt, 0) on the constrained subspace.
Vec3 suslov_rhs(const InertiaTensor& inertia, const Vec3& w);
// Closed-form multiplier lambda(w) on the constrained subspace.
double suslov_multiplier(const InertiaTensor& inertia, const Vec3& w);

// lambda is a quadratic form on the constrained subspace: lambda(w) = w_m^T Q w_m.
Mat2 multiplier_form(const InertiaTensor& inertia);
// lambda(w + delta) - lambda(w), evaluated without cancellation.
double multiplier_change(const InertiaTensor& inertia, const Vec3& w, const Vec3& delta);

struct ProjectedDynamics {
  Vec3 rhs;
  double lambda;
};

// Multiplier elimination for a general covector a: with
// f = I^-1 ((I w) x w) and C = <a, I^-1 a>, lambda = -<a, f> / C and the
// projected right-hand side is f + lambda I^-1 a. Requires I to be invertible
// with positive-definite symmetric part (DegenerateError otherwise, and when
// C <= 1e-14) and <a, w> = 0 (ConstraintError).
ProjectedDynamics eliminate_multiplier(const InertiaTensor& inertia,
                                       const ConstraintCovector& a,
                                       const Vec3& w);

// Classical 4-stage Runge-Kutta step of suslov_rhs.
Vec3 rk4_step(const InertiaTensor& inertia, const Vec3& w, double eps);
// n_steps + 1 states starting at w0.
std::vector<Vec3> integrate_reference(const InertiaTensor& inertia,
                                      const Vec3& w0, double eps, long n_steps);

// R cay(eps w).
Rot3 reconstruct_step(const Rot3& r, const Vec3& w, double eps);

// <a R^T, R hat(w)> evaluated as a . (R^T R) w. Equal to <a, w> when R is
// orthonormal; R may be an arbitrary matrix.
double unreduced_constraint_residual(const Mat3& r, const Vec3& w,
                                     const ConstraintCovector& a);
inline double unreduced_constraint_residual(const Rot3& r, const Vec3& w,
                                            const ConstraintCovector& a) {
  return unreduced_constraint_residual(r.matrix(), w, a);
}

// Accurate solution (w, R, lambda) at time eps from (w0, R0).
//
// w is advanced with RK4 and R by composing one Cayley factor per substep,
// R <- R cay(u), where u comes from a fourth-order Munthe-Kaas stage set
// driven by the RK4-resolved velocity. Starting from `substeps` substeps the count is doubled until two
// successive results agree to 1e-12 in group distance and 1e-13 in w;
// NonConvergence is thrown after `max_doublings` doublings.
struct ReferenceFlow {
  Vec3 omega;
  Mat3 rotation;
  double lambda;
  long substeps;
  // omega - w0 and lambda - lambda(w0), accumulated directly so that
  // differences against a one-step method keep full relative precision.
  Vec3 omega_increment;
  double lambda_change;
};

ReferenceFlow reference_flow(const InertiaTensor& inertia, const Vec3& w0,
                             const Mat3& r0, double eps, long substeps = 1000,
                             int max_doublings = 6);

// One evaluation with a fixed substep count, no acceptance test.
ReferenceFlow reference_flow_fixed(const InertiaTensor& inertia, const Vec3& w0,
                                   const Mat3& r0, double eps, long substeps);

}  // namespace suslov
