#pragma once

#include <stdexcept>
#include <string>

namespace freeconv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An intermediate complex quantity landed on the cut of the branch in use.
class BranchError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// (alpha, s) violates the angle conditions required for a probability measure.
class AdmissibilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative or extrapolated computation did not reach its tolerance.
/// The best estimate found so far is attached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace freeconv
