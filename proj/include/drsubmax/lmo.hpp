#pragma once

#include <optional>

#include <Eigen/Core>

#include "drsubmax/geometry.hpp"

namespace drsubmax {

/// Linear maximization query over a (possibly shifted and capped) shrunken
/// body.  The solve runs in unshifted coordinates and the shift is applied to
/// the result, so the simplex never sees negative variables.
struct LmoQuery {
  Eigen::VectorXd direction;
  Eigen::VectorXd base_shift;               // z_1, or zero
  std::optional<Eigen::VectorXd> upper_cap; // v <= cap, coordinate-wise
};

/// argmax of <v, direction> over {z - base_shift : z in body} intersected
/// with {v <= upper_cap} when capped.  Ties break to the lexicographically
/// smallest point.
Eigen::VectorXd lmo(const ShrunkenBody& body, const LmoQuery& query,
                    double tol = 1e-9);

}  // namespace drsubmax
