#pragma once

#include <stdexcept>

namespace linkage {

// Malformed inputs: missing fields, inconsistent shapes, invariant violations.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arguments outside an operation's mathematical domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A numerical routine failed to reach its accuracy target.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Covariance too close to singular for a reliable solve.
struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace linkage
