#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gasp {

/// Bad arguments: length mismatch, divisibility, out-of-range parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("inverse of zero in prime field") {}
};

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix() : std::runtime_error("matrix is singular") {}
};

/// Rejection sampling for an evaluation plan ran out of attempts.
class SearchFailure : public std::runtime_error {
 public:
  explicit SearchFailure(std::size_t attempts)
      : std::runtime_error("no valid evaluation plan after " +
                           std::to_string(attempts) + " attempts"),
        attempts_(attempts) {}
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  std::size_t attempts_;
};

/// An exhaustive enumeration would exceed its step budget; it is refused
/// rather than silently sampled.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A postcondition that should be impossible for valid inputs failed.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gasp
