#pragma once

#include <stdexcept>
#include <string>

namespace orthocoeff {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed Gram matrix, wrong weight, dimension mismatch, wrong dispatch.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A prime where the local lattice is not maximal was handed to a maximal-only path.
class NonMaximalError : public ValidationError {
 public:
  NonMaximalError(long long p, const std::string& what)
      : ValidationError(what), prime(p) {}
  long long prime;
};

// An enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An internal consistency check failed (rationality, integrality, stabilization).
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace orthocoeff
