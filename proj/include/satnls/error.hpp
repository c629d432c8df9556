#pragma once

#include <stdexcept>
#include <string>

namespace satnls {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input lies outside the admissible domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

private:
  double last_residual_;
  int iterations_;
};

/// A converged solution breaks a qualitative property it must have
/// (positivity, monotone decay, sign structure).
class ShapeViolation : public Error {
public:
  using Error::Error;
};

/// A linear operator that must be invertible is (numerically) singular.
class SingularSystem : public Error {
public:
  using Error::Error;
};

}  // namespace satnls
