#include "suslov/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "suslov/cayley.hpp"
#include "suslov/errors.hpp"

namespace suslov {

namespace {

constexpr double kBlockDetTol = 1e-14;
constexpr double kCouplingTol = 1e-14;

// I_3i w_i summed over i in {1, 2}.
double third_row_coupling(const InertiaTensor& inertia, const Vec3& w) {
  return inertia(2, 0) * w.x() + inertia(2, 1) * w.y();
}

}  // namespace

InertiaTensor::InertiaTensor(const Mat3& m) : m_(m) {
  if (!m.allFinite()) throw DegenerateError("InertiaTensor: non-finite entries");
  block_ = m.topLeftCorner<2, 2>();
  block_det_ = block_.determinant();
  if (!(std::abs(block_det_) > kBlockDetTol)) {
    throw DegenerateError("InertiaTensor: upper-left 2x2 block is singular");
  }
}

InertiaTensor InertiaTensor::reference() {
  Mat3 m;
  m << 1.0, 0.1, 0.2,
       0.1, 1.0, 0.2,
       0.2, 0.1, 1.0;
  return InertiaTensor(m);
}

ConstraintCovector::ConstraintCovector(const Vec3& a) {
  const double n = a.norm();
  if (!std::isfinite(n) || n < 1e-14) {
    throw DegenerateError("ConstraintCovector: zero or non-finite direction");
  }
  a_ = a / n;
}

void require_constrained(const Vec3& w, const char* where) {
  if (!w.allFinite() || std::abs(w.z()) > kConstraintTol) {
    std::ostringstream msg;
    msg << where << ": velocity (" << w.x() << ", " << w.y() << ", " << w.z()
        << ") violates the constraint w_3 = 0";
    throw ConstraintError(msg.str());
  }
}

double reduced_lagrangian(const InertiaTensor& inertia, const Vec3& w) {
  return 0.5 * w.dot(inertia.matrix() * w);
}

Vec3 reduced_lagrangian_gradient(const InertiaTensor& inertia, const Vec3& w) {
  return 0.5 * (inertia.matrix() + inertia.matrix().transpose()) * w;
}

double reduced_energy(const InertiaTensor& inertia, const Vec3& w) {
  return 0.5 * w.dot(inertia.matrix() * w);
}

Vec3 suslov_rhs(const InertiaTensor& inertia, const Vec3& w) {
  require_constrained(w, "suslov_rhs");
  const double s = third_row_coupling(inertia, w);
  const double det = inertia.block_det();
  const double w1 = w.x();
  const double w2 = w.y();
  return Vec3(-(inertia(1, 1) * w2 + inertia(0, 1) * w1) * s / det,
              (inertia(1, 0) * w2 + inertia(0, 0) * w1) * s / det, 0.0);
}

double suslov_multiplier(const InertiaTensor& inertia, const Vec3& w) {
  require_constrained(w, "suslov_multiplier");
  const double w1 = w.x();
  const double w2 = w.y();
  const double row1 = inertia(0, 0) * w1 + inertia(0, 1) * w2;
  const double row2 = inertia(1, 0) * w1 + inertia(1, 1) * w2;
  const double s = third_row_coupling(inertia, w);
  const double c2 = inertia(2, 1) * inertia(1, 0) - inertia(2, 0) * inertia(1, 1);
  const double c1 = inertia(2, 1) * inertia(0, 0) - inertia(2, 0) * inertia(0, 1);
  return w1 * row2 - w2 * row1 + (s / inertia.block_det()) * (c2 * w2 + c1 * w1);
}

Mat2 multiplier_form(const InertiaTensor& inertia) {
  const double det = inertia.block_det();
  const double i31 = inertia(2, 0);
  const double i32 = inertia(2, 1);
  const double c2 = i32 * inertia(1, 0) - i31 * inertia(1, 1);
  const double c1 = i32 * inertia(0, 0) - i31 * inertia(0, 1);
  const double off = 0.5 * (inertia(1, 1) - inertia(0, 0) + (i31 * c2 + i32 * c1) / det);
  Mat2 q;
  q << inertia(1, 0) + i31 * c1 / det, off,
       off, -inertia(0, 1) + i32 * c2 / det;
  return q;
}

double multiplier_change(const InertiaTensor& inertia, const Vec3& w, const Vec3& delta) {
  require_constrained(w, "multiplier_change");
  require_constrained(delta, "multiplier_change");
  // Q symmetric: (w+d)^T Q (w+d) - w^T Q w = d^T Q (2w + d).
  const Vec2 d = delta.head<2>();
  return d.dot(multiplier_form(inertia) * (2.0 * w.head<2>() + d));
}

ProjectedDynamics eliminate_multiplier(const InertiaTensor& inertia,
                                       const ConstraintCovector& a,
                                       const Vec3& w) {
  const Mat3& m = inertia.matrix();
  const Mat3 sym = 0.5 * (m + m.transpose());
  Eigen::LLT<Mat3> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw DegenerateError("eliminate_multiplier: inertia is not positive-definite");
  }
  const Eigen::FullPivLU<Mat3> lu(m);
  if (!lu.isInvertible()) {
    throw DegenerateError("eliminate_multiplier: inertia is singular");
  }
  const Vec3& av = a.vector();
  if (!w.allFinite() || std::abs(av.dot(w)) > kConstraintTol) {
    throw ConstraintError("eliminate_multiplier: <a, w> != 0");
  }

  // Bracket on so(3) is the cross product: ad*_w (I w) = (I w) x w.
  const Vec3 f = lu.solve((m * w).cross(w));
  const Vec3 inv_a = lu.solve(av);
  const double coupling = av.dot(inv_a);
  if (!(coupling > kCouplingTol)) {
    throw DegenerateError("eliminate_multiplier: <a, I^-1 a> vanishes");
  }
  const double lambda = -av.dot(f) / coupling;
  return {f + lambda * inv_a, lambda};
}

Vec3 rk4_step(const InertiaTensor& inertia, const Vec3& w, double eps) {
  const Vec3 k1 = suslov_rhs(inertia, w);
  const Vec3 k2 = suslov_rhs(inertia, w + 0.5 * eps * k1);
  const Vec3 k3 = suslov_rhs(inertia, w + 0.5 * eps * k2);
  const Vec3 k4 = suslov_rhs(inertia, w + eps * k3);
  return w + (eps / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<Vec3> integrate_reference(const InertiaTensor& inertia,
                                      const Vec3& w0, double eps, long n_steps) {
  require_constrained(w0, "integrate_reference");
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.push_back(w0);
  Vec3 w = w0;
  for (long k = 0; k < n_steps; ++k) {
    w = rk4_step(inertia, w, eps);
    out.push_back(w);
  }
  return out;
}

Rot3 reconstruct_step(const Rot3& r, const Vec3& w, double eps) {
  return r.compose(cay(eps * w));
}

double unreduced_constraint_residual(const Mat3& r, const Vec3& w,
                                     const ConstraintCovector& a) {
  return a.vector().dot((r.transpose() * r) * w);
}

namespace {

struct FlowSample {
  Vec3 omega;  // increment from w0
  Mat3 rotation;
};

// Integrates the increment d = w - w0 rather than w itself; d is small, so
// its rounding error is far below that of w. The attitude follows each
// substep as one Cayley Runge-Kutta-Munthe-Kaas stage set: the local
// coordinate u of R = R_n cay(u) obeys du/dt = dcay_inv(-u) w(t), which is
// solved by classical RK4 with w taken at the substep start, middle and end.
FlowSample composed_flow(const InertiaTensor& inertia, const Vec3& w0,
                         const Mat3& r0, double eps, long substeps) {
  const double h = eps / static_cast<double>(substeps);
  Vec3 d = Vec3::Zero();
  Vec3 carry = Vec3::Zero();  // Kahan compensation
  Mat3 r = r0;
  auto advance_half = [&]() {
    const double hh = 0.5 * h;
    const Vec3 w = w0 + d;
    const Vec3 k1 = suslov_rhs(inertia, w);
    const Vec3 k2 = suslov_rhs(inertia, w + 0.5 * hh * k1);
    const Vec3 k3 = suslov_rhs(inertia, w + 0.5 * hh * k2);
    const Vec3 k4 = suslov_rhs(inertia, w + hh * k3);
    const Vec3 y = (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4) - carry;
    const Vec3 t = d + y;
    carry = (t - d) - y;
    d = t;
  };
  for (long n = 0; n < substeps; ++n) {
    const Vec3 w_start = w0 + d;
    advance_half();
    const Vec3 w_mid = w0 + d;
    advance_half();
    const Vec3 w_end = w0 + d;

    const Vec3 k1 = w_start;
    const Vec3 k2 = dcay_inv(-0.5 * h * k1) * w_mid;
    const Vec3 k3 = dcay_inv(-0.5 * h * k2) * w_mid;
    const Vec3 k4 = dcay_inv(-h * k3) * w_end;
    r = r * cay((h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).matrix();
  }
  return {d, r};
}

}  // namespace

namespace {

ReferenceFlow finish(const InertiaTensor& inertia, const Vec3& w0, FlowSample sample,
                     long substeps) {
  const Vec3 w = w0 + sample.omega;
  return {w,
          sample.rotation,
          suslov_multiplier(inertia, w),
          substeps,
          sample.omega,
          multiplier_change(inertia, w0, sample.omega)};
}

}  // namespace

ReferenceFlow reference_flow_fixed(const InertiaTensor& inertia, const Vec3& w0,
                                   const Mat3& r0, double eps, long substeps) {
  require_constrained(w0, "reference_flow");
  if (substeps < 1) throw DomainError("reference_flow: substeps must be positive");
  return finish(inertia, w0, composed_flow(inertia, w0, r0, eps, substeps), substeps);
}

ReferenceFlow reference_flow(const InertiaTensor& inertia, const Vec3& w0,
                             const Mat3& r0, double eps, long substeps,
                             int max_doublings) {
  require_constrained(w0, "reference_flow");
  if (substeps < 1) throw DomainError("reference_flow: substeps must be positive");
  FlowSample coarse = composed_flow(inertia, w0, r0, eps, substeps);
  for (int d = 0; d < max_doublings; ++d) {
    substeps *= 2;
    FlowSample fine = composed_flow(inertia, w0, r0, eps, substeps);
    const double dr = group_distance(coarse.rotation, fine.rotation);
    const double dw = (coarse.omega - fine.omega).norm();
    if (dr <= 1e-12 && dw <= 1e-13) return finish(inertia, w0, std::move(fine), substeps);
    coarse = std::move(fine);
  }
  throw NonConvergence("reference_flow: substep doubling did not converge");
}

}  // namespace suslov
