#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Core>

#include "common.hpp"
#include "drsubmax/errors.hpp"
#include "drsubmax/objective.hpp"
#include "drsubmax/oracle.hpp"
#include "drsubmax/rng.hpp"

using namespace drsubmax;
using drsubmax::testing::box_body;
using drsubmax::testing::coverage2;
using drsubmax::testing::quad_1d;
using drsubmax::testing::quad_monotone2;
using drsubmax::testing::quad_nonmonotone2;

namespace {

Eigen::VectorXd rand_point(int d, Xoshiro256& rng) {
  Eigen::VectorXd x(d);
  for (int i = 0; i < d; ++i) x(i) = rng.uniform01();
  return x;
}

}  // namespace

TEST_CASE("quadratic values and gradients") {
  const Objective f1 = quad_1d();
  CHECK(f1.value((Eigen::VectorXd(1) << 1.0).finished()) == doctest::Approx(0.5));
  CHECK(f1.gradient((Eigen::VectorXd(1) << 1.0).finished())(0) ==
        doctest::Approx(0.0));
  CHECK(f1.value(Eigen::VectorXd::Zero(1)) == doctest::Approx(0.0));
  CHECK(f1.gradient(Eigen::VectorXd::Zero(1))(0) == doctest::Approx(1.0));

  const Objective f2 = quad_monotone2();
  CHECK(f2.value((Eigen::VectorXd(2) << 0.5, 0.5).finished()) ==
        doctest::Approx(0.75));
}

TEST_CASE("certified constants of the shared instances") {
  const Objective f2 = quad_monotone2();
  CHECK(f2.lipschitz == doctest::Approx(std::sqrt(2.0)));
  CHECK(f2.smoothness >= 1.0);
  CHECK(f2.smoothness <= 1.0 + 1e-5);
  CHECK(f2.monotone);

  const Objective f1 = quad_1d();
  CHECK(f1.lipschitz == doctest::Approx(1.0));
  CHECK(f1.smoothness == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(f1.monotone);

  const Objective g = quad_nonmonotone2();
  CHECK(!g.monotone);
  // Offset lifts the worst vertex to exactly zero.
  CHECK(g.value(Eigen::VectorXd::Ones(2)) == doctest::Approx(0.0));
  CHECK(g.value(Eigen::VectorXd::Zero(2)) == doctest::Approx(0.2));
}

TEST_CASE("builder rejects non-DR or asymmetric quadratics") {
  Eigen::MatrixXd bad(2, 2);
  bad << -1, 0.5, 0.5, -1;  // positive off-diagonal
  CHECK_THROWS_AS(make_dr_quadratic(bad, Eigen::VectorXd::Ones(2)),
                  std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << -1, -0.5, -0.25, -1;
  CHECK_THROWS_AS(make_dr_quadratic(asym, Eigen::VectorXd::Ones(2)),
                  std::invalid_argument);
}

TEST_CASE("coverage values, gradient and guards") {
  const Objective f = coverage2();
  CHECK(f.value(Eigen::VectorXd::Ones(2)) == doctest::Approx(1.0));
  CHECK(f.value(Eigen::VectorXd::Zero(2)) == doctest::Approx(0.0));
  CHECK(f.value((Eigen::VectorXd(2) << 0.5, 0.5).finished()) ==
        doctest::Approx(0.75));
  CHECK(f.gradient(Eigen::VectorXd::Zero(2))(0) == doctest::Approx(1.0));
  CHECK(f.monotone);

  CHECK_THROWS_AS(make_coverage({{0}}, Eigen::VectorXd::Ones(1), 13),
                  DimensionTooLargeError);
  CHECK_THROWS_AS(make_coverage({{0}}, (Eigen::VectorXd(1) << -1.0).finished(), 2),
                  std::invalid_argument);
}

TEST_CASE("queries outside the cube are rejected") {
  const Objective f = quad_monotone2();
  CHECK_THROWS_AS(f.value((Eigen::VectorXd(2) << 1.5, 0.0).finished()),
                  OutOfDomainError);
  CHECK_THROWS_AS(f.gradient((Eigen::VectorXd(2) << -0.5, 0.0).finished()),
                  OutOfDomainError);
}

TEST_CASE("finite differences confirm the gradients") {
  Xoshiro256 rng(51);
  for (const Objective& f : {quad_monotone2(), quad_nonmonotone2(), coverage2()}) {
    for (int rep = 0; rep < 200; ++rep) {
      Eigen::VectorXd x(f.dim);
      for (int i = 0; i < f.dim; ++i) x(i) = 0.1 + 0.8 * rng.uniform01();
      const Eigen::VectorXd g = f.gradient(x);
      for (int i = 0; i < f.dim; ++i) {
        const double h = 1e-5;
        Eigen::VectorXd hi = x, lo = x;
        hi(i) += h;
        lo(i) -= h;
        const double fd = (f.value(hi) - f.value(lo)) / (2 * h);
        CHECK(std::abs(fd - g(i)) <= 1e-6 * std::max(1.0, std::abs(g(i))));
      }
    }
  }
}

TEST_CASE("diminishing returns along coordinates") {
  Xoshiro256 rng(53);
  for (const Objective& f : {quad_monotone2(), quad_nonmonotone2(), coverage2()}) {
    for (int rep = 0; rep < 200; ++rep) {
      Eigen::VectorXd x = rand_point(f.dim, rng);
      Eigen::VectorXd y = x;
      for (int i = 0; i < f.dim; ++i) y(i) += (1.0 - y(i)) * rng.uniform01();
      const int coord = static_cast<int>(rng.below(f.dim));
      const double headroom = 1.0 - y(coord);
      if (headroom < 1e-6) continue;
      const double c = headroom * rng.uniform01();
      Eigen::VectorXd xc = x, yc = y;
      xc(coord) += c;
      yc(coord) += c;
      CHECK(f.value(xc) - f.value(x) >= f.value(yc) - f.value(y) - 1e-9);
    }
  }
}

TEST_CASE("join bound for non-negative objectives") {
  Xoshiro256 rng(59);
  for (const Objective& f : {quad_monotone2(), quad_nonmonotone2(), coverage2()}) {
    for (int rep = 0; rep < 500; ++rep) {
      const Eigen::VectorXd x = rand_point(f.dim, rng);
      const Eigen::VectorXd y = rand_point(f.dim, rng);
      const Eigen::VectorXd join = x.cwiseMax(y);
      CHECK(f.value(join) >=
            (1.0 - x.cwiseAbs().maxCoeff()) * f.value(y) - 1e-9);
    }
  }
}

TEST_CASE("gradient inner product dominates the join-meet defect") {
  Xoshiro256 rng(61);
  for (const Objective& f : {quad_monotone2(), quad_nonmonotone2(), coverage2()}) {
    for (int rep = 0; rep < 500; ++rep) {
      const Eigen::VectorXd x = rand_point(f.dim, rng);
      const Eigen::VectorXd y = rand_point(f.dim, rng);
      const double lhs = f.gradient(x).dot(y - x);
      const double rhs = f.value(x.cwiseMax(y)) + f.value(x.cwiseMin(y)) -
                         2.0 * f.value(x);
      CHECK(lhs >= rhs - 1e-9);
    }
  }
}

TEST_CASE("smoothing a linear objective changes nothing") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd h0(2);
  h0 << 0.3, 0.7;
  const Objective f = make_dr_quadratic(h, h0);
  const SmoothedView view(f, 0.2, Eigen::MatrixXd::Identity(2, 2));
  const Eigen::VectorXd x = (Eigen::VectorXd(2) << 0.5, 0.4).finished();
  CHECK(view.closed_form(x) == doctest::Approx(f.value(x)));

  Xoshiro256 rng(67);
  const auto est = view.monte_carlo(x, 20000, rng);
  CHECK(std::abs(est.mean - f.value(x)) <= 3.0 * est.std_error + 1e-12);
}

TEST_CASE("1-d smoothed quadratic: closed form and Monte Carlo agree") {
  const Objective f = quad_1d();
  const SmoothedView view(f, 0.3, Eigen::MatrixXd::Identity(1, 1));
  const Eigen::VectorXd x = (Eigen::VectorXd(1) << 0.5).finished();
  // Averaging x - x^2/2 over [x - 0.3, x + 0.3]: the quadratic term picks up
  // E[v^2] = 1/3 over the unit 1-ball, so the value drops by 0.09/6.
  CHECK(view.closed_form(x) == doctest::Approx(f.value(x) - 0.015));

  Xoshiro256 rng(71);
  const auto est = view.monte_carlo(x, 1000000, rng);
  CHECK(std::abs(est.mean - view.closed_form(x)) <= 3.0 * est.std_error);
}

TEST_CASE("smoothing stays within delta * G everywhere") {
  Xoshiro256 rng(73);
  for (const Objective& f : {quad_monotone2(), coverage2()}) {
    const double delta = 0.2;
    const SmoothedView view(f, delta, Eigen::MatrixXd::Identity(2, 2));
    for (int rep = 0; rep < 200; ++rep) {
      Eigen::VectorXd x(2);
      for (int i = 0; i < 2; ++i) x(i) = delta + (1 - 2 * delta) * rng.uniform01();
      const auto est = view.monte_carlo(x, 2000, rng);
      CHECK(std::abs(est.mean - f.value(x)) <=
            delta * f.lipschitz + 3.0 * est.std_error);
    }
  }
}

TEST_CASE("smoothing preserves monotonicity along ascending pairs") {
  Xoshiro256 rng(79);
  const Objective f = quad_monotone2();
  const double delta = 0.15;
  const SmoothedView view(f, delta, Eigen::MatrixXd::Identity(2, 2));
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd x(2), y(2);
    for (int i = 0; i < 2; ++i) {
      x(i) = delta + (1 - 2 * delta) * rng.uniform01();
      y(i) = x(i) + (1 - delta - x(i)) * rng.uniform01();
    }
    const auto ex = view.monte_carlo(x, 4000, rng);
    const auto ey = view.monte_carlo(y, 4000, rng);
    CHECK(ey.mean >= ex.mean - 3.0 * (ex.std_error + ey.std_error));
  }
}

TEST_CASE("deterministic value oracle is exact and counts queries") {
  const ConvexBody body = box_body(2);
  const Objective f = quad_monotone2();
  OracleHandle oracle(f, body, OracleKind::value_det, 0.0, 1);
  const Eigen::VectorXd z = (Eigen::VectorXd(2) << 0.25, 0.5).finished();
  CHECK(oracle.value(z) == doctest::Approx(f.value(z)));
  CHECK(oracle.value(z) == doctest::Approx(f.value(z)));
  CHECK(oracle.query_count() == 2);
}

TEST_CASE("zero-noise stochastic oracle equals the deterministic one") {
  const ConvexBody body = box_body(2);
  const Objective f = quad_monotone2();
  OracleHandle stoch(f, body, OracleKind::value_stoch, 0.0, 7);
  const Eigen::VectorXd z = (Eigen::VectorXd(2) << 0.7, 0.1).finished();
  CHECK(stoch.value(z) == doctest::Approx(f.value(z)));
}

TEST_CASE("stochastic value oracle mean obeys the CLT band") {
  const ConvexBody body = box_body(2);
  const Objective f = quad_monotone2();
  const double sigma = 0.1;
  OracleHandle oracle(f, body, OracleKind::value_stoch, sigma, 11);
  const Eigen::VectorXd z = (Eigen::VectorXd(2) << 0.3, 0.6).finished();
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += oracle.value(z);
  CHECK(std::abs(sum / n - f.value(z)) <= 3.0 * sigma / std::sqrt(double(n)));
  CHECK(oracle.query_count() == n);
}

TEST_CASE("stochastic gradient oracle noise has the declared energy") {
  const ConvexBody body = box_body(2);
  const Objective f = quad_monotone2();
  const double sigma = 0.2;
  OracleHandle oracle(f, body, OracleKind::grad_stoch, sigma, 13);
  const Eigen::VectorXd z = (Eigen::VectorXd(2) << 0.4, 0.4).finished();
  const Eigen::VectorXd mean_grad = f.gradient(z);
  const int n = 50000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd g = oracle.gradient(z);
    sum += g;
    energy += (g - mean_grad).squaredNorm();
  }
  CHECK((sum / n - mean_grad).norm() <= 3.0 * sigma / std::sqrt(double(n)));
  CHECK(energy / n == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("infeasible query is a hard error") {
  const ConvexBody body = testing::triangle_body();
  const Objective f = quad_monotone2();
  OracleHandle oracle(f, body, OracleKind::value_det, 0.0, 1);
  CHECK_THROWS_AS(oracle.value((Eigen::VectorXd(2) << 0.9, 0.9).finished()),
                  InfeasibleQueryError);
}

TEST_CASE("split streams are independent and deterministic") {
  const ConvexBody body = box_body(2);
  const Objective f = quad_monotone2();
  OracleHandle base(f, body, OracleKind::value_stoch, 0.5, 99);
  OracleHandle a = base.split(0);
  OracleHandle b = base.split(1);
  OracleHandle a2 = base.split(0);
  const Eigen::VectorXd z = (Eigen::VectorXd(2) << 0.5, 0.5).finished();
  const double va = a.value(z);
  CHECK(va != b.value(z));
  CHECK(va == a2.value(z));
}
