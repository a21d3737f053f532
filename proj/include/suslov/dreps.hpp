// Discrete reduced Euler-Poincare-Suslov (DREPS) one-step maps.
//
// A scheme is an implicit relation residual(w_k, w_{k+1}, eps) = 0 on the
// constrained coordinates (w_1, w_2), plus a rule producing the discrete
// multiplier lambda_{k+1}. The third velocity component never enters the
// unknowns, so every scheme keeps w_3 = 0 exactly.
//
// Two schemes are provided:
//  * MidpointScheme: implicit midpoint rule on the decoupled ODE with
//    lambda_{k+1} = lambda(w_{k+1}); second order in w and lambda.
//  * VariationalScheme: the Cayley-retraction variational integrator for the
//    discrete Lagrangian eps*l; second order in w, while its multiplier
//    differs from lambda(t) by an O(1) offset (see inconsistency_offset).
#pragma once

#include <memory>
#include <string_view>

#include "suslov/dynamics.hpp"

namespace suslov {

class DrepsScheme {
 public:
  explicit DrepsScheme(InertiaTensor inertia) : inertia_(std::move(inertia)) {}
  virtual ~DrepsScheme() = default;

  virtual std::string_view name() const = 0;
  // Residual in terms of the increment delta = w_next - w_k (constrained part).
  virtual Vec2 increment_residual(const Vec3& w_k, const Vec2& delta, double eps) const = 0;
  virtual Mat2 jacobian(const Vec3& w_k, const Vec3& w_next, double eps) const = 0;
  virtual double multiplier(const Vec3& w_k, const Vec3& w_next, double eps) const = 0;
  // lambda_{k+1} - lambda(w_k) given the increment.
  virtual double multiplier_change(const Vec3& w_k, const Vec3& delta, double eps) const = 0;

  Vec2 residual(const Vec3& w_k, const Vec3& w_next, double eps) const;

  const InertiaTensor& inertia() const { return inertia_; }

 private:
  InertiaTensor inertia_;
};

Vec2 midpoint_residual(const InertiaTensor& inertia, const Vec3& w_k,
                       const Vec3& w_next, double eps);
Vec2 midpoint_increment_residual(const InertiaTensor& inertia, const Vec3& w_k,
                                 const Vec2& delta, double eps);
Mat2 midpoint_jacobian(const InertiaTensor& inertia, const Vec3& w_k,
                       const Vec3& w_next, double eps);
double midpoint_multiplier(const InertiaTensor& inertia, const Vec3& w_next);

Vec2 variational_residual(const InertiaTensor& inertia, const Vec3& w_k,
                          const Vec3& w_next, double eps);
Vec2 variational_increment_residual(const InertiaTensor& inertia, const Vec3& w_k,
                                    const Vec2& delta, double eps);
Mat2 variational_jacobian(const InertiaTensor& inertia, const Vec3& w_k,
                          const Vec3& w_next, double eps);
// Already on the physical scale (the -1/eps^2 rescaling is built in).
double variational_multiplier(const InertiaTensor& inertia, const Vec3& w_k,
                              const Vec3& w_next);

// Limit of lambda(t_k + eps) - lambda_{k+1} as eps -> 0 for the variational
// scheme: the I_3i-coupled part of lambda(w).
double inconsistency_offset(const InertiaTensor& inertia, const Vec3& w);

class MidpointScheme final : public DrepsScheme {
 public:
  using DrepsScheme::DrepsScheme;
  std::string_view name() const override { return "midpoint"; }
  Vec2 increment_residual(const Vec3& w_k, const Vec2& delta, double eps) const override {
    return midpoint_increment_residual(inertia(), w_k, delta, eps);
  }
  Mat2 jacobian(const Vec3& w_k, const Vec3& w_next, double eps) const override {
    return midpoint_jacobian(inertia(), w_k, w_next, eps);
  }
  double multiplier(const Vec3&, const Vec3& w_next, double) const override {
    return midpoint_multiplier(inertia(), w_next);
  }
  double multiplier_change(const Vec3& w_k, const Vec3& delta, double) const override {
    return suslov::multiplier_change(inertia(), w_k, delta);
  }
};

class VariationalScheme final : public DrepsScheme {
 public:
  using DrepsScheme::DrepsScheme;
  std::string_view name() const override { return "variational"; }
  Vec2 increment_residual(const Vec3& w_k, const Vec2& delta, double eps) const override {
    return variational_increment_residual(inertia(), w_k, delta, eps);
  }
  Mat2 jacobian(const Vec3& w_k, const Vec3& w_next, double eps) const override {
    return variational_jacobian(inertia(), w_k, w_next, eps);
  }
  double multiplier(const Vec3& w_k, const Vec3& w_next, double) const override {
    return variational_multiplier(inertia(), w_k, w_next);
  }
  double multiplier_change(const Vec3& w_k, const Vec3& delta, double) const override {
    return variational_multiplier(inertia(), w_k, w_k + delta) - suslov_multiplier(inertia(), w_k);
  }
};

// Returns nullptr for an unknown name.
std::unique_ptr<DrepsScheme> make_scheme(std::string_view name,
                                         const InertiaTensor& inertia);

struct NewtonConfig {
  double tol = 1e-13;          // residual 2-norm
  int max_iter = 50;
  bool fd_jacobian = false;    // central differences instead of the analytic Jacobian
  double max_condition = 1e12; // SingularJacobian above this
};

struct StepResult {
  Vec3 omega_next;
  double lambda_next;
  int newton_iters;
  double jacobian_condition;
  Vec3 omega_increment;  // omega_next - w_k as solved for
  double lambda_change;  // lambda_next - lambda(w_k)
};

// Central-difference Jacobian of scheme.residual in w_next.
Mat2 finite_difference_jacobian(const DrepsScheme& scheme, const Vec3& w_k,
                                const Vec3& w_next, double eps, double h = 1e-6);

// 2-norm condition number; +inf for a singular matrix.
double condition_number(const Mat2& m);

// Newton iteration from w_next = w_k. An iterate is accepted when the
// residual is below cfg.tol after a quadratically small update, or when the
// update has stagnated at round-off level.
StepResult newton_solve(const DrepsScheme& scheme, const Vec3& w_k, double eps,
                        const NewtonConfig& cfg = {});

struct DrepsStep {
  SuslovState state;
  double lambda;
  int newton_iters;
  double jacobian_condition;
  Vec3 omega_increment;
  double lambda_change;
};

// One step of the discrete flow (R_k, w_k) -> (R_{k+1}, w_{k+1}):
// R_{k+1} = R_k cay(eps w_k), w_{k+1} from newton_solve.
DrepsStep dreps_step(const DrepsScheme& scheme, const SuslovState& state,
                     double eps, const NewtonConfig& cfg = {});

}  // namespace suslov
