#pragma once

#include <stdexcept>

namespace convflow {

// Raised when an input exceeds a configured enumeration bound.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on numerical breakdown: solver failure, cross-check disagreement,
// or an iteration that does not converge within its analytic budget.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace convflow
