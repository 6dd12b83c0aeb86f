#pragma once

#include <stdexcept>
#include <string>

namespace csp {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible or invalid matrix/vector dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid operator/model configuration (bad group count, reference index, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or other numeric contract violations.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual_mass)
      : Error(what), residual_mass_(residual_mass) {}

  /// Remaining off-diagonal (or margin) mass when iteration gave up.
  double residual_mass() const { return residual_mass_; }

 private:
  double residual_mass_ = 0.0;
};

} // namespace csp
