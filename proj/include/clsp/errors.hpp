#pragma once

#include <stdexcept>
#include <string>

namespace clsp {

/// Shape or domain mismatch between arguments (wrong dimensions, negative data, ...).
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed instance / plan / reference text.
struct ParseError : StructuralError {
  using StructuralError::StructuralError;
};

/// The instance (or a supplied plan) admits no feasible production plan.
struct InfeasibleInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad benchmark configuration or command line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The period-by-period construction could not absorb a forced overload.
/// Never raised for instances that pass instance_feasible().
struct ConstructionFailure : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace clsp
