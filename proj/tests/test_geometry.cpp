#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Core>

#include "common.hpp"
#include "drsubmax/errors.hpp"
#include "drsubmax/geometry.hpp"
#include "drsubmax/rng.hpp"

using namespace drsubmax;
using drsubmax::testing::box_body;
using drsubmax::testing::scaled_box_body;
using drsubmax::testing::segment_body;
using drsubmax::testing::triangle_body;

namespace {

// Rejection sampler in hull coordinates around the deep center.
Eigen::VectorXd sample_in(const ShrunkenBody& body, Xoshiro256& rng) {
  const ConvexBody& parent = *body.parent;
  Eigen::VectorXd w(parent.hull_dim), x(parent.dim_ambient);
  while (true) {
    for (int i = 0; i < w.size(); ++i) w(i) = 4.0 * rng.uniform01() - 2.0;
    x = parent.cheb_center + parent.hull_basis * w;
    if (contains(body, x, 1e-12)) return x;
  }
}

Eigen::VectorXd hull_direction(const ConvexBody& body, Xoshiro256& rng) {
  Eigen::VectorXd w(body.hull_dim);
  double n;
  do {
    for (int i = 0; i < w.size(); ++i) w(i) = rng.normal();
    n = w.norm();
  } while (n < 1e-12);
  return body.hull_basis * (w / n);
}

}  // namespace

TEST_CASE("unit box caches") {
  const ConvexBody body = box_body(2);
  CHECK(body.hull_dim == 2);
  CHECK(body.cheb_center(0) == doctest::Approx(0.5));
  CHECK(body.cheb_center(1) == doctest::Approx(0.5));
  CHECK(body.inradius == doctest::Approx(0.5));
  CHECK(body.contains_origin);
  CHECK(body.down_closed);
  CHECK(body.diameter_bound == doctest::Approx(std::sqrt(2.0)));
  CHECK(body.min_inf_norm == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(body.vertices.size() == 4);
}

TEST_CASE("one equality drops one hull dimension") {
  const ConvexBody body = segment_body();
  CHECK(body.hull_dim == 1);
  // basis proportional to (1,-1)/sqrt(2)
  const double b0 = body.hull_basis(0, 0), b1 = body.hull_basis(1, 0);
  CHECK(std::abs(b0 + b1) <= 1e-9);
  CHECK(std::abs(std::abs(b0) - 1.0 / std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("empty intersection is rejected") {
  Eigen::MatrixXd a(1, 2);
  a << -1, 0;  // x >= 2
  Eigen::VectorXd b(1);
  b << -2;
  CHECK_THROWS_AS(
      build_body(a, b, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 2, {}),
      InfeasibleError);
}

TEST_CASE("single point body has a degenerate hull") {
  Eigen::MatrixXd e(2, 2);
  e << 1, 0, 0, 1;
  Eigen::VectorXd f(2);
  f << 0.3, 0.7;
  CHECK_THROWS_AS(
      build_body(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), e, f, 2, {}),
      DegenerateHullError);
}

TEST_CASE("implied equality x <= 0 folds into the hull") {
  Eigen::MatrixXd a(1, 2);
  a << 1, 0;  // x <= 0, and the cube gives x >= 0
  Eigen::VectorXd b(1);
  b << 0;
  const ConvexBody body =
      build_body(a, b, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 2, {});
  CHECK(body.hull_dim == 1);
  CHECK(std::abs(body.hull_basis(0, 0)) <= 1e-9);
}

TEST_CASE("full-dimensional box hull is the identity span") {
  const ConvexBody body = box_body(3);
  CHECK(body.hull_dim == 3);
  const Eigen::MatrixXd gram = body.hull_basis.transpose() * body.hull_basis;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("triangle deep center against a grid oracle") {
  // Independent oracle: maximize over a fine grid the minimum distance to
  // the three edges x=0, y=0, x+y=1.
  double best = 0.0;
  const int m = 400;
  for (int i = 1; i < m; ++i) {
    for (int j = 1; j < m; ++j) {
      const double x = static_cast<double>(i) / m;
      const double y = static_cast<double>(j) / m;
      if (x + y >= 1.0) continue;
      const double depth = std::min({x, y, (1.0 - x - y) / std::sqrt(2.0)});
      best = std::max(best, depth);
    }
  }
  const double analytic = (2.0 - std::sqrt(2.0)) / 2.0;
  CHECK(best == doctest::Approx(analytic).epsilon(2e-2));

  const ConvexBody body = triangle_body();
  CHECK(body.inradius == doctest::Approx(analytic).epsilon(1e-9));
  CHECK(body.cheb_center(0) == doctest::Approx(analytic).epsilon(1e-9));
  CHECK(body.cheb_center(1) == doctest::Approx(analytic).epsilon(1e-9));
}

TEST_CASE("segment deep center sits midway, radius along the hull") {
  // 1-D oracle: at (s, 1-s) the in-segment distance to the nearer endpoint
  // is min(s, 1-s) * sqrt(2), maximal at s = 1/2.
  double best = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = i / 1000.0;
    best = std::max(best, std::min(s, 1.0 - s) * std::sqrt(2.0));
  }
  CHECK(best == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));

  const ConvexBody body = segment_body();
  CHECK(body.cheb_center(0) == doctest::Approx(0.5));
  CHECK(body.cheb_center(1) == doctest::Approx(0.5));
  CHECK(body.inradius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("deep-center feasibility rows and permutation stability") {
  for (const ConvexBody& body :
       {box_body(2), triangle_body(), scaled_box_body(0.2, 0.8, false)}) {
    for (int i = 0; i < body.ineq_coeffs.rows(); ++i) {
      const Eigen::VectorXd row = body.ineq_coeffs.row(i).transpose();
      const double proj = (body.hull_basis.transpose() * row).norm();
      CHECK(row.dot(body.cheb_center) + body.inradius * proj <=
            body.ineq_rhs(i) + 1e-9);
    }
    // Same feasible set with rows reversed: the optimal radius must agree.
    const Eigen::MatrixXd rev_rows = body.ineq_coeffs.colwise().reverse();
    const Eigen::VectorXd rev_rhs = body.ineq_rhs.reverse();
    const auto [c2, r2] = chebyshev_center(rev_rows, rev_rhs, body.eq_coeffs,
                                           body.eq_rhs, body.hull_basis);
    CHECK(r2 == doctest::Approx(body.inradius).epsilon(1e-7));
    CHECK((c2 - body.cheb_center).norm() <= 1e-7);
  }
}

TEST_CASE("box shrink is the inner box") {
  const ConvexBody body = box_body(2);
  const ShrunkenBody small = shrink(body, 0.1);
  CHECK(contains(small, (Eigen::VectorXd(2) << 0.1, 0.1).finished(), 1e-9));
  CHECK(contains(small, (Eigen::VectorXd(2) << 0.9, 0.9).finished(), 1e-9));
  CHECK(!contains(small, (Eigen::VectorXd(2) << 0.0999, 0.5).finished(), 1e-6));
  CHECK(!contains(small, (Eigen::VectorXd(2) << 0.9001, 0.5).finished(), 1e-6));
}

TEST_CASE("zero shrink is the identity") {
  const ConvexBody body = triangle_body();
  const ShrunkenBody same = shrink(body, 0.0);
  CHECK((same.ineq_rhs - body.ineq_rhs).cwiseAbs().maxCoeff() == 0.0);
  CHECK(same.outer_margin == 0.0);
}

TEST_CASE("shrink rejects radii past the inradius") {
  const ConvexBody body = box_body(2);
  CHECK_THROWS_AS(shrink(body, 0.5), DeltaTooLargeError);
  CHECK_THROWS_AS(shrink(body, 0.7), DeltaTooLargeError);
}

TEST_CASE("triangle half-shrink right-hand side is the midpoint formula") {
  const ConvexBody body = triangle_body();
  const double delta = body.inradius / 2.0;
  const ShrunkenBody small = shrink(body, delta);
  const Eigen::VectorXd expect =
      0.5 * body.ineq_rhs + 0.5 * (body.ineq_coeffs * body.cheb_center);
  CHECK((small.ineq_rhs - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("shrink map is affine: vertex images satisfy the shrunken rows") {
  for (const ConvexBody& body : {box_body(2), triangle_body()}) {
    const double delta = 0.3 * body.inradius;
    const ShrunkenBody small = shrink(body, delta);
    const double t = delta / body.inradius;
    for (const auto& v : body.vertices) {
      const Eigen::VectorXd image = (1.0 - t) * v + t * body.cheb_center;
      CHECK(((body.ineq_coeffs * image - small.ineq_rhs).array() <= 1e-9).all());
    }
  }
}

TEST_CASE("membership basics") {
  const ConvexBody body = box_body(2);
  CHECK(contains(body, (Eigen::VectorXd(2) << 0.5, 0.5).finished(), 1e-9));
  CHECK(!contains(body, (Eigen::VectorXd(2) << 1.0 + 1e-6, 0.5).finished(), 1e-9));
  for (const ConvexBody& b : {box_body(2), triangle_body(), segment_body()})
    CHECK(contains(b, b.cheb_center, 1e-9));
}

TEST_CASE("min sup-norm point of the shrunken box is the scaled center") {
  const ConvexBody body = box_body(2);
  const ShrunkenBody small = shrink(body, 0.1);
  const Eigen::VectorXd z1 = min_inf_norm_point(small);
  CHECK(z1(0) == doctest::Approx(0.1));
  CHECK(z1(1) == doctest::Approx(0.1));
  CHECK(z1.cwiseAbs().maxCoeff() <= 0.1 / 0.5 + 1e-9);
}

TEST_CASE("min sup-norm point of a shifted box is its low corner") {
  const ConvexBody body = scaled_box_body(0.2, 0.8, false);
  const ShrunkenBody whole = shrink(body, 0.0);
  const Eigen::VectorXd z1 = min_inf_norm_point(whole);
  CHECK(z1(0) == doctest::Approx(0.2));
  CHECK(z1(1) == doctest::Approx(0.2));
  CHECK(body.min_inf_norm == doctest::Approx(0.2));
}

TEST_CASE("origin-containing body starts at the origin") {
  const ConvexBody body = triangle_body();
  const ShrunkenBody whole = shrink(body, 0.0);
  CHECK(min_inf_norm_point(whole).norm() <= 1e-9);
}

TEST_CASE("sandwich: shrunken points keep a full margin ball inside") {
  Xoshiro256 rng(31);
  for (const ConvexBody& body :
       {box_body(2), triangle_body(), scaled_box_body(0.2, 0.8, false),
        segment_body()}) {
    const double delta = 0.4 * body.inradius;
    const ShrunkenBody small = shrink(body, delta);
    for (int s = 0; s < 250; ++s) {
      const Eigen::VectorXd z = sample_in(small, rng);
      for (int dir = 0; dir < 16; ++dir) {
        const Eigen::VectorXd u = hull_direction(body, rng);
        CHECK(contains(body, z + delta * u, 1e-7));
      }
    }
  }
}

TEST_CASE("sandwich: every body point is near its shrunken image") {
  Xoshiro256 rng(37);
  for (const ConvexBody& body : {box_body(2), triangle_body()}) {
    const double delta = 0.4 * body.inradius;
    const ShrunkenBody small = shrink(body, delta);
    const double t = delta / body.inradius;
    const ShrunkenBody whole = shrink(body, 0.0);
    for (int s = 0; s < 1000; ++s) {
      const Eigen::VectorXd x = sample_in(whole, rng);
      const Eigen::VectorXd y = (1.0 - t) * x + t * body.cheb_center;
      CHECK(contains(small, y, 1e-7));
      CHECK((x - y).norm() <= small.outer_margin + 1e-9);
    }
  }
}

TEST_CASE("down-closed parent gives a down-closed shrunken body") {
  Xoshiro256 rng(41);
  for (const ConvexBody& body : {box_body(2), triangle_body()}) {
    const double delta = 0.3 * body.inradius;
    const ShrunkenBody small = shrink(body, delta);
    const Eigen::VectorXd base =
        (delta / body.inradius) * body.cheb_center;  // image of the origin
    for (int s = 0; s < 300; ++s) {
      const Eigen::VectorXd z = sample_in(small, rng);
      Eigen::VectorXd zp(z.size());
      for (int i = 0; i < z.size(); ++i)
        zp(i) = base(i) + rng.uniform01() * (z(i) - base(i));
      CHECK(contains(small, zp, 1e-7));
    }
  }
}

TEST_CASE("hull reconstruction: feasible points live in the anchored span") {
  Xoshiro256 rng(43);
  for (const ConvexBody& body : {segment_body(), triangle_body()}) {
    const ShrunkenBody whole = shrink(body, 0.0);
    for (int s = 0; s < 200; ++s) {
      const Eigen::VectorXd x = sample_in(whole, rng);
      const Eigen::VectorXd rel = x - body.cheb_center;
      const Eigen::VectorXd back =
          body.hull_basis * (body.hull_basis.transpose() * rel);
      CHECK((rel - back).norm() <= 1e-8);
    }
  }
}
