#pragma once

#include <stdexcept>
#include <string>

namespace bcm {

/// Shape or dimensionality of an argument does not match its peers.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A value violates a documented invariant (weights, masses, headers, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A matrix expected to be symmetric positive definite is not.
class NotSpdError : public std::domain_error {
 public:
  NotSpdError(const std::string& what, double offending_eigenvalue)
      : std::domain_error(what), eigenvalue(offending_eigenvalue) {}
  double eigenvalue;
};

class IllConditionedError : public std::domain_error {
 public:
  IllConditionedError(const std::string& what, double condition)
      : std::domain_error(what), condition_number(condition) {}
  double condition_number;
};

/// An iterative routine hit its iteration budget before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what), residual(last_residual), iterations(iterations) {}
  double residual;
  int iterations;
};

/// Bad run configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace bcm
