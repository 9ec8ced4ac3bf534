#pragma once

#include <stdexcept>
#include <string>

namespace fpt {

// Raised when a computation cannot produce a trustworthy number
// (quadrature failure, divergent normalization, failed decay test, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when inputs violate a documented precondition or schema.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace fpt
