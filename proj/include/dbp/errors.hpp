#pragma once

#include <stdexcept>
#include <string>

namespace dbp {

// Numerical machinery failed (non-convergent quadrature, NaN from an
// integrand, degenerate sampler). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The requested object does not exist mathematically (e.g. a min-DB prior
// with infinite tail index). Maps to CLI exit code 4.
class PriorNotDefinedError : public std::runtime_error {
 public:
  explicit PriorNotDefinedError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace dbp
