#pragma once

#include <stdexcept>
#include <string>

namespace perpetua {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (s < 0, r <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed catalog id or parameter string.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operation requires data (closed forms, laws, kappa) the input does not carry.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition on the input object does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A supplied object failed numeric validation (e.g. a candidate kappa whose
/// Laplace transform does not match Phi'/Phi).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Sample input has the wrong shape (unsorted, non-uniform, too short).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Two independent computation routes disagree beyond tolerance.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, double first, double second)
      : Error(what), first_(first), second_(second) {}
  double first() const noexcept { return first_; }
  double second() const noexcept { return second_; }

 private:
  double first_;
  double second_;
};

class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double log_value)
      : Error(what), log_value_(log_value) {}
  double log_value() const noexcept { return log_value_; }

 private:
  double log_value_;
};

/// An iterative routine stopped at its cap without meeting tolerance.
/// Carries the best value reached and the last convergence gap.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double best_value, double gap)
      : Error(what), best_value_(best_value), gap_(gap) {}
  double best_value() const noexcept { return best_value_; }
  double gap() const noexcept { return gap_; }

 private:
  double best_value_;
  double gap_;
};

class QuadratureError : public NonConvergenceError {
 public:
  using NonConvergenceError::NonConvergenceError;
};

/// Integrand produced a non-finite integral (non-integrable blow-up).
class SingularInputError : public QuadratureError {
 public:
  using QuadratureError::QuadratureError;
};

}  // namespace perpetua
