#include "suslov/dreps.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "suslov/errors.hpp"

namespace suslov {

namespace {

double coupling(const InertiaTensor& inertia, const Vec2& w) {
  return inertia(2, 0) * w.x() + inertia(2, 1) * w.y();
}

// (l_1, l_2) = (-w_2 s, w_1 s) with s = I_3i w_i.
Vec2 gyroscopic(const InertiaTensor& inertia, const Vec2& w) {
  const double s = coupling(inertia, w);
  return Vec2(-w.y() * s, w.x() * s);
}

Mat2 gyroscopic_jacobian(const InertiaTensor& inertia, const Vec2& w) {
  const double s = coupling(inertia, w);
  const double i31 = inertia(2, 0);
  const double i32 = inertia(2, 1);
  Mat2 d;
  d << -w.y() * i31, -s - w.y() * i32,
       s + w.x() * i31, w.x() * i32;
  return d;
}

// w w^T I_m w, the cubic term of the variational scheme.
Vec2 cubic(const InertiaTensor& inertia, const Vec2& w) {
  return w * w.dot(inertia.block() * w);
}

Mat2 cubic_jacobian(const InertiaTensor& inertia, const Vec2& w) {
  const Mat2& b = inertia.block();
  const double q = w.dot(b * w);
  return q * Mat2::Identity() + w * (w.transpose() * (b + b.transpose()));
}

Vec2 constrained(const Vec3& w) { return w.head<2>(); }

}  // namespace

Vec2 DrepsScheme::residual(const Vec3& w_k, const Vec3& w_next, double eps) const {
  require_constrained(w_k, "residual");
  require_constrained(w_next, "residual");
  return increment_residual(w_k, constrained(w_next) - constrained(w_k), eps);
}

Vec2 midpoint_increment_residual(const InertiaTensor& inertia, const Vec3& w_k,
                                 const Vec2& delta, double eps) {
  require_constrained(w_k, "midpoint_residual");
  return inertia.block() * (delta / eps) -
         gyroscopic(inertia, constrained(w_k) + 0.5 * delta);
}

Vec2 midpoint_residual(const InertiaTensor& inertia, const Vec3& w_k,
                       const Vec3& w_next, double eps) {
  require_constrained(w_next, "midpoint_residual");
  return midpoint_increment_residual(inertia, w_k,
                                     constrained(w_next) - constrained(w_k), eps);
}

Mat2 midpoint_jacobian(const InertiaTensor& inertia, const Vec3& w_k,
                       const Vec3& w_next, double eps) {
  const Vec2 mid = 0.5 * (constrained(w_k) + constrained(w_next));
  return inertia.block() / eps - 0.5 * gyroscopic_jacobian(inertia, mid);
}

double midpoint_multiplier(const InertiaTensor& inertia, const Vec3& w_next) {
  return suslov_multiplier(inertia, w_next);
}

Vec2 variational_increment_residual(const InertiaTensor& inertia, const Vec3& w_k,
                                    const Vec2& delta, double eps) {
  require_constrained(w_k, "variational_residual");
  const Vec2 a = constrained(w_k);
  const Vec2 b = a + delta;
  return inertia.block() * delta -
         0.5 * eps * (gyroscopic(inertia, b) + gyroscopic(inertia, a)) +
         0.25 * eps * eps * (cubic(inertia, b) - cubic(inertia, a));
}

Vec2 variational_residual(const InertiaTensor& inertia, const Vec3& w_k,
                          const Vec3& w_next, double eps) {
  require_constrained(w_next, "variational_residual");
  return variational_increment_residual(inertia, w_k,
                                        constrained(w_next) - constrained(w_k), eps);
}

Mat2 variational_jacobian(const InertiaTensor& inertia, const Vec3&,
                          const Vec3& w_next, double eps) {
  const Vec2 b = constrained(w_next);
  return inertia.block() - 0.5 * eps * gyroscopic_jacobian(inertia, b) +
         0.25 * eps * eps * cubic_jacobian(inertia, b);
}

double variational_multiplier(const InertiaTensor& inertia, const Vec3& w_k,
                              const Vec3& w_next) {
  require_constrained(w_k, "variational_multiplier");
  require_constrained(w_next, "variational_multiplier");
  auto half = [&](const Vec3& w) {
    const double row1 = inertia(0, 0) * w.x() + inertia(0, 1) * w.y();
    const double row2 = inertia(1, 0) * w.x() + inertia(1, 1) * w.y();
    return w.x() * row2 - w.y() * row1;
  };
  return 0.5 * (half(w_next) + half(w_k));
}

double inconsistency_offset(const InertiaTensor& inertia, const Vec3& w) {
  require_constrained(w, "inconsistency_offset");
  const double s = inertia(2, 0) * w.x() + inertia(2, 1) * w.y();
  const double c2 = inertia(2, 1) * inertia(1, 0) - inertia(2, 0) * inertia(1, 1);
  const double c1 = inertia(2, 1) * inertia(0, 0) - inertia(2, 0) * inertia(0, 1);
  return (s / inertia.block_det()) * (c2 * w.y() + c1 * w.x());
}

std::unique_ptr<DrepsScheme> make_scheme(std::string_view name,
                                         const InertiaTensor& inertia) {
  if (name == "midpoint") return std::make_unique<MidpointScheme>(inertia);
  if (name == "variational") return std::make_unique<VariationalScheme>(inertia);
  return nullptr;
}

Mat2 finite_difference_jacobian(const DrepsScheme& scheme, const Vec3& w_k,
                                const Vec3& w_next, double eps, double h) {
  Mat2 j;
  for (int c = 0; c < 2; ++c) {
    Vec3 plus = w_next;
    Vec3 minus = w_next;
    plus(c) += h;
    minus(c) -= h;
    j.col(c) = (scheme.residual(w_k, plus, eps) - scheme.residual(w_k, minus, eps)) /
               (2.0 * h);
  }
  return j;
}

double condition_number(const Mat2& m) {
  const Eigen::JacobiSVD<Mat2> svd(m);
  const auto& s = svd.singularValues();
  if (s(1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(1);
}

StepResult newton_solve(const DrepsScheme& scheme, const Vec3& w_k, double eps,
                        const NewtonConfig& cfg) {
  require_constrained(w_k, "newton_solve");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw DomainError("newton_solve: invalid NewtonConfig");
  }
  constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();
  // Iterate on the increment so that its rounding error scales with |delta|.
  Vec2 delta = Vec2::Zero();
  auto next_of = [&](const Vec2& d) {
    return Vec3(w_k.x() + d.x(), w_k.y() + d.y(), 0.0);
  };
  double cond = 1.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vec3 x = next_of(delta);
    const Vec2 r = scheme.increment_residual(w_k, delta, eps);
    const Mat2 j = cfg.fd_jacobian ? finite_difference_jacobian(scheme, w_k, x, eps)
                                   : scheme.jacobian(w_k, x, eps);
    cond = condition_number(j);
    if (!(cond <= cfg.max_condition)) {
      std::ostringstream msg;
      msg << "newton_solve: Jacobian condition number " << cond << " exceeds "
          << cfg.max_condition << " (" << scheme.name() << ", eps=" << eps << ")";
      throw SingularJacobian(msg.str());
    }
    const Vec2 dx = j.partialPivLu().solve(r);
    delta -= dx;
    if (!delta.allFinite()) break;

    const double scale = 1.0 + next_of(delta).head<2>().norm();
    const double step = dx.norm();
    const bool quadratic = step <= 1e-8 * scale &&
                           scheme.increment_residual(w_k, delta, eps).norm() <= cfg.tol;
    if (quadratic || step <= kRoundoff * scale) {
      const Vec3 inc(delta.x(), delta.y(), 0.0);
      const Vec3 w_next = next_of(delta);
      return {w_next,
              scheme.multiplier(w_k, w_next, eps),
              it,
              cond,
              inc,
              scheme.multiplier_change(w_k, inc, eps)};
    }
  }
  std::ostringstream msg;
  msg << "newton_solve: no convergence in " << cfg.max_iter << " iterations ("
      << scheme.name() << ", eps=" << eps << ")";
  throw NonConvergence(msg.str());
}

DrepsStep dreps_step(const DrepsScheme& scheme, const SuslovState& state,
                     double eps, const NewtonConfig& cfg) {
  require_constrained(state.omega, "dreps_step");
  SuslovState next;
  next.rotation = reconstruct_step(state.rotation, state.omega, eps);
  const StepResult solved = newton_solve(scheme, state.omega, eps, cfg);
  next.omega = solved.omega_next;
  next.time = state.time + eps;
  return {next,           solved.lambda_next,     solved.newton_iters,
          solved.jacobian_condition, solved.omega_increment, solved.lambda_change};
}

}  // namespace suslov
