#pragma once

// Shared instances for the test suites: small bodies and objectives with
// hand-checkable constants.

#include <Eigen/Core>

#include "drsubmax/geometry.hpp"
#include "drsubmax/objective.hpp"

namespace drsubmax::testing {

inline ConvexBody box_body(int d) {
  return build_body(Eigen::MatrixXd(0, d), Eigen::VectorXd(0),
                    Eigen::MatrixXd(0, d), Eigen::VectorXd(0), d,
                    BodyFlags{.down_closed = true});
}

/// {x, y >= 0, x + y <= 1}; inradius (2 - sqrt 2)/2 at center (r, r).
inline ConvexBody triangle_body() {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::VectorXd b(1);
  b << 1;
  return build_body(a, b, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 2,
                    BodyFlags{.down_closed = true});
}

/// [lo, hi]^2 axis box.
inline ConvexBody scaled_box_body(double lo, double hi, bool down_closed) {
  Eigen::MatrixXd a(4, 2);
  a << 1, 0, 0, 1, -1, 0, 0, -1;
  Eigen::VectorXd b(4);
  b << hi, hi, -lo, -lo;
  return build_body(a, b, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 2,
                    BodyFlags{.down_closed = down_closed});
}

/// The segment {x + y = 1} inside the unit square; hull dimension 1.
inline ConvexBody segment_body() {
  Eigen::MatrixXd e(1, 2);
  e << 1, 1;
  Eigen::VectorXd f(1);
  f << 1;
  return build_body(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), e, f, 2,
                    BodyFlags{});
}

/// F(x, y) = x + y - (x^2 + y^2)/2; monotone, G = sqrt(2), L = 1, max 1 at
/// the top corner of the unit box.
inline Objective quad_monotone2() {
  Eigen::MatrixXd h = -Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd h0(2);
  h0 << 1, 1;
  return make_dr_quadratic(h, h0);
}

/// F(x, y) = 0.4(x + y) - (x^2 + y^2)/2 + 0.2 after the non-negativity
/// offset; gradient turns negative past 0.4, so non-monotone.
inline Objective quad_nonmonotone2() {
  Eigen::MatrixXd h = -Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd h0(2);
  h0 << 0.4, 0.4;
  return make_dr_quadratic(h, h0);
}

/// F(x) = x - x^2/2 on [0,1]; G = L = 1, max 1/2 at x = 1.
inline Objective quad_1d() {
  Eigen::MatrixXd h(1, 1);
  h << -1;
  Eigen::VectorXd h0(1);
  h0 << 1;
  return make_dr_quadratic(h, h0);
}

/// Single covered pair {0, 1} with unit weight: F = 1 - (1-x)(1-y).
inline Objective coverage2() {
  return make_coverage({{0, 1}}, Eigen::VectorXd::Ones(1), 2);
}

}  // namespace drsubmax::testing
