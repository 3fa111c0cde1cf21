#pragma once

#include <Eigen/Core>

#include "drsubmax/geometry.hpp"
#include "drsubmax/objective.hpp"

namespace drsubmax {

struct GridResult {
  Eigen::VectorXd maximizer;
  double value = 0.0;
  double gap_bound = 0.0;  // Lipschitz certificate: F(true max) <= value + gap
};

/// Exhaustive grid search over the body, used as the independent baseline
/// the optimizers are judged against.  The grid lives in hull coordinates
/// (per-axis ranges found by LP), so equality-constrained bodies are covered
/// at full resolution; infeasible grid points are skipped.  Ties break to the
/// lexicographically smallest point.
///
/// resolution is the number of points per axis; throws GridTooLargeError when
/// resolution^hull_dim exceeds 1e8.
GridResult grid_maximize(const Objective& objective, const ConvexBody& body,
                         int resolution);

}  // namespace drsubmax
