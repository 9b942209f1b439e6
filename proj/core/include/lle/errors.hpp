#pragma once

#include <stdexcept>
#include <string>

namespace lle {

// User-facing input problems (bad parameters, malformed files). CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failures (no convergence, blow-up, ill-posed extraction). CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual(last_residual) {}
  double last_residual;
};

class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double last_finite_time)
      : NumericalError(what), last_finite_time(last_finite_time) {}
  double last_finite_time;
};

}  // namespace lle
