#pragma once

#include <stdexcept>
#include <string>

namespace drsubmax {

/// Constraint system has no feasible point.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Feasible set is a single point (affine hull dimension 0).
struct DegenerateHullError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested shrink radius is at least the inradius.
struct DeltaTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// LP pivoting stalled or broke tolerance after retries.
struct NumericalFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective queried outside [0,1]^d.
struct OutOfDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Oracle queried at a point outside the feasible set.  Always a bug in the
/// caller; never swallowed.
struct InfeasibleQueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Algorithm variant incompatible with the body flags (e.g. variant that
/// starts at the origin on a body that does not contain it).
struct VariantBodyMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterate left the feasible set; signals a bug in the update logic.
struct FeasibilityViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Accuracy target would require a sampling radius >= the inradius.
struct TargetTooTightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad or missing field in an experiment config.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace drsubmax
