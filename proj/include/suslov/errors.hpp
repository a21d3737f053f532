#pragma once

#include <stdexcept>
#include <string>

namespace suslov {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of an operation (non-skew matrix, Cayley chart
// boundary, attitude that is not orthonormal within tolerance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Velocity that violates the nonholonomic constraint <a, w> = 0.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

// Inertia tensor or constraint data that make the multiplier undefined.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Failure of the implicit one-step solve. `step()` is the trajectory step
// index when known, -1 otherwise.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what, long step = -1)
      : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

class NonConvergence : public SolverError {
 public:
  using SolverError::SolverError;
};

class SingularJacobian : public SolverError {
 public:
  using SolverError::SolverError;
};

// Log-log fit on samples that are not measurable (underflow, too few points).
class FitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace suslov
