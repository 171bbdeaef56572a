#pragma once

#include <stdexcept>
#include <string>

namespace gaussvol {

// Argument violates an operation's contract (bad shape, bad mode count, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the mathematical domain of the operation,
// e.g. a covariance matrix that is not positive definite.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure failed: overflow, loss of a defining identity,
// or an iterative procedure that did not converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gaussvol
