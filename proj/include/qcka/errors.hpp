#pragma once

#include <stdexcept>
#include <string>

namespace qcka {

// Input violates a type invariant or an operation precondition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numeric routine failed to produce a finite or converged result.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcka
