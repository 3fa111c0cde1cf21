#include "drsubmax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "drsubmax/errors.hpp"

namespace drsubmax {

namespace {

Eigen::MatrixXd with_cube_rows(const Eigen::MatrixXd& ineq, int d) {
  Eigen::MatrixXd out(ineq.rows() + 2 * d, d);
  out.topRows(ineq.rows()) = ineq;
  out.middleRows(ineq.rows(), d) = Eigen::MatrixXd::Identity(d, d);
  out.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  return out;
}

Eigen::VectorXd with_cube_rhs(const Eigen::VectorXd& rhs, int d) {
  Eigen::VectorXd out(rhs.size() + 2 * d);
  out.head(rhs.size()) = rhs;
  out.segment(rhs.size(), d).setOnes();
  out.tail(d).setZero();
  return out;
}

// Orthonormal null-space basis of E (columns), sign-canonicalized so the
// entry of largest magnitude is positive.
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& eq, int d, double tol) {
  if (eq.rows() == 0) return Eigen::MatrixXd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(eq, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  Eigen::MatrixXd basis = svd.matrixV().rightCols(d - rank);
  for (int j = 0; j < basis.cols(); ++j) {
    int argmax = 0;
    basis.col(j).cwiseAbs().maxCoeff(&argmax);
    if (basis(argmax, j) < 0) basis.col(j) = -basis.col(j);
  }
  return basis;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
    if (result > cap) return cap + 1;
  }
  return result;
}

}  // namespace

LpProblem body_lp(const ConvexBody& body) {
  LpProblem p;
  p.ineq_coeffs = body.ineq_coeffs;
  p.ineq_rhs = body.ineq_rhs;
  p.eq_coeffs = body.eq_coeffs;
  p.eq_rhs = body.eq_rhs;
  p.objective = Eigen::VectorXd::Zero(body.dim_ambient);
  return p;
}

LpProblem body_lp(const ShrunkenBody& body) {
  LpProblem p = body_lp(*body.parent);
  p.ineq_rhs = body.ineq_rhs;
  p.eq_rhs = body.eq_rhs;
  return p;
}

AffineHull affine_hull(const Eigen::MatrixXd& ineq_coeffs,
                       const Eigen::VectorXd& ineq_rhs,
                       const Eigen::MatrixXd& eq_coeffs,
                       const Eigen::VectorXd& eq_rhs,
                       double tol, double tol_implied) {
  const int d = static_cast<int>(ineq_coeffs.cols());
  LpProblem p;
  p.ineq_coeffs = ineq_coeffs;
  p.ineq_rhs = ineq_rhs;
  p.eq_coeffs = eq_coeffs;
  p.eq_rhs = eq_rhs;
  p.objective = Eigen::VectorXd::Zero(d);

  AffineHull hull;
  hull.anchor = lp_solve(p, tol).point;  // also proves feasibility

  for (int i = 0; i < ineq_coeffs.rows(); ++i) {
    p.objective = ineq_coeffs.row(i).transpose();
    const double row_max = lp_solve(p, tol).value;
    p.objective = -ineq_coeffs.row(i).transpose();
    const double row_min = -lp_solve(p, tol).value;
    if (std::abs(row_max - ineq_rhs(i)) <= tol_implied &&
        std::abs(row_min - ineq_rhs(i)) <= tol_implied) {
      hull.implied_rows.push_back(i);
    }
  }

  Eigen::MatrixXd eq_all(eq_coeffs.rows() + hull.implied_rows.size(), d);
  if (eq_coeffs.rows() > 0) eq_all.topRows(eq_coeffs.rows()) = eq_coeffs;
  for (std::size_t j = 0; j < hull.implied_rows.size(); ++j)
    eq_all.row(eq_coeffs.rows() + j) = ineq_coeffs.row(hull.implied_rows[j]);

  hull.basis = null_space_basis(eq_all, d, tol);
  hull.dim = static_cast<int>(hull.basis.cols());
  if (hull.dim == 0) throw DegenerateHullError("feasible set is a single point");
  return hull;
}

std::pair<Eigen::VectorXd, double> chebyshev_center(
    const Eigen::MatrixXd& ineq_coeffs, const Eigen::VectorXd& ineq_rhs,
    const Eigen::MatrixXd& eq_coeffs, const Eigen::VectorXd& eq_rhs,
    const Eigen::MatrixXd& hull_basis, double tol) {
  const int d = static_cast<int>(ineq_coeffs.cols());
  const int q = static_cast<int>(ineq_coeffs.rows());
  // Variables (x, rho): maximize rho subject to a_i.x + |B^T a_i| rho <= b_i
  // and the equality rows (rho coefficient 0).
  LpProblem p;
  p.ineq_coeffs.resize(q, d + 1);
  p.ineq_coeffs.leftCols(d) = ineq_coeffs;
  for (int i = 0; i < q; ++i)
    p.ineq_coeffs(i, d) = (hull_basis.transpose() * ineq_coeffs.row(i).transpose()).norm();
  p.ineq_rhs = ineq_rhs;
  p.eq_coeffs.resize(eq_coeffs.rows(), d + 1);
  if (eq_coeffs.rows() > 0) {
    p.eq_coeffs.leftCols(d) = eq_coeffs;
    p.eq_coeffs.col(d).setZero();
  }
  p.eq_rhs = eq_rhs;
  p.objective = Eigen::VectorXd::Zero(d + 1);
  p.objective(d) = 1.0;

  const LpSolution sol = lp_solve_lex(p, tol);
  const double radius = sol.value;
  if (radius <= tol) throw DegenerateHullError("inradius is zero");
  return {sol.point.head(d), radius};
}

std::optional<std::vector<Eigen::VectorXd>> enumerate_vertices(
    const ConvexBody& body, std::size_t max_vertices, std::size_t max_subsets) {
  const int k = body.hull_dim;
  const int q = static_cast<int>(body.ineq_coeffs.rows());
  if (binomial_capped(q, k, max_subsets) > max_subsets) return std::nullopt;

  // Work in hull coordinates: x = anchor + B w, rows A' w <= b'.
  const Eigen::MatrixXd reduced = body.ineq_coeffs * body.hull_basis;
  const Eigen::VectorXd reduced_rhs =
      body.ineq_rhs - body.ineq_coeffs * body.cheb_center;

  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  std::vector<Eigen::VectorXd> out;
  std::map<std::vector<long long>, bool> seen;

  Eigen::MatrixXd sq(k, k);
  Eigen::VectorXd sqrhs(k);
  while (true) {
    for (int i = 0; i < k; ++i) {
      sq.row(i) = reduced.row(pick[i]);
      sqrhs(i) = reduced_rhs(pick[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sq);
    lu.setThreshold(1e-10);
    if (lu.rank() == k) {
      const Eigen::VectorXd w = lu.solve(sqrhs);
      if (((reduced * w - reduced_rhs).array() <= 1e-9).all()) {
        std::vector<long long> key(k);
        for (int i = 0; i < k; ++i) key[i] = llround(w(i) * 1e7);
        if (seen.emplace(std::move(key), true).second) {
          out.push_back(body.cheb_center + body.hull_basis * w);
          if (out.size() > max_vertices) return std::nullopt;
        }
      }
    }
    // next combination
    int j = k - 1;
    while (j >= 0 && pick[j] == q - k + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int i = j + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  return out;
}

ConvexBody build_body(const Eigen::MatrixXd& ineq_coeffs,
                      const Eigen::VectorXd& ineq_rhs,
                      const Eigen::MatrixXd& eq_coeffs,
                      const Eigen::VectorXd& eq_rhs,
                      int dim,
                      const BodyFlags& flags,
                      double tol) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (ineq_coeffs.rows() != ineq_rhs.size() || eq_coeffs.rows() != eq_rhs.size())
    throw std::invalid_argument("constraint row/rhs size mismatch");

  ConvexBody body;
  body.dim_ambient = dim;
  body.ineq_coeffs = with_cube_rows(ineq_coeffs, dim);
  body.ineq_rhs = with_cube_rhs(ineq_rhs, dim);
  body.eq_coeffs = eq_coeffs.rows() > 0 ? eq_coeffs : Eigen::MatrixXd(0, dim);
  body.eq_rhs = eq_rhs;
  body.down_closed = flags.down_closed;

  const AffineHull hull = affine_hull(body.ineq_coeffs, body.ineq_rhs,
                                      body.eq_coeffs, body.eq_rhs, tol);
  body.hull_basis = hull.basis;
  body.hull_dim = hull.dim;

  // Fold implied equalities so shrink and membership treat them exactly.
  if (!hull.implied_rows.empty()) {
    const auto old_rows = body.eq_coeffs.rows();
    body.eq_coeffs.conservativeResize(old_rows + hull.implied_rows.size(), dim);
    body.eq_rhs.conservativeResize(old_rows + hull.implied_rows.size());
    for (std::size_t j = 0; j < hull.implied_rows.size(); ++j) {
      body.eq_coeffs.row(old_rows + j) = body.ineq_coeffs.row(hull.implied_rows[j]);
      body.eq_rhs(old_rows + j) = body.ineq_rhs(hull.implied_rows[j]);
    }
  }

  auto [center, radius] = chebyshev_center(body.ineq_coeffs, body.ineq_rhs,
                                           body.eq_coeffs, body.eq_rhs,
                                           body.hull_basis, tol);
  body.cheb_center = center;
  body.inradius = radius;

  if (auto verts = enumerate_vertices(body)) {
    body.vertices = std::move(*verts);
    double best = 0.0;
    for (std::size_t i = 0; i < body.vertices.size(); ++i)
      for (std::size_t j = i + 1; j < body.vertices.size(); ++j)
        best = std::max(best, (body.vertices[i] - body.vertices[j]).norm());
    body.diameter_bound = body.vertices.size() > 1 ? best : std::sqrt(double(dim));
  } else {
    body.diameter_bound = std::sqrt(static_cast<double>(dim));
  }

  {
    ShrunkenBody whole;
    whole.parent = &body;
    whole.delta = 0.0;
    whole.ineq_rhs = body.ineq_rhs;
    whole.eq_rhs = body.eq_rhs;
    const Eigen::VectorXd z = min_inf_norm_point(whole, tol);
    body.min_inf_norm = z.size() > 0 ? z.cwiseAbs().maxCoeff() : 0.0;
  }

  body.contains_origin =
      contains(body, Eigen::VectorXd::Zero(dim), std::max(tol, 1e-9));
  return body;
}

ShrunkenBody shrink(const ConvexBody& body, double delta) {
  if (delta < 0) throw std::invalid_argument("negative shrink radius");
  if (delta > 0 && delta >= body.inradius)
    throw DeltaTooLargeError("shrink radius must stay below the inradius");
  ShrunkenBody s;
  s.parent = &body;
  s.delta = delta;
  if (delta == 0.0) {
    s.ineq_rhs = body.ineq_rhs;
    s.eq_rhs = body.eq_rhs;
    s.outer_margin = 0.0;
    return s;
  }
  const double t = delta / body.inradius;
  s.ineq_rhs = (1.0 - t) * body.ineq_rhs + t * (body.ineq_coeffs * body.cheb_center);
  s.eq_rhs = body.eq_rhs.size() > 0
                 ? Eigen::VectorXd((1.0 - t) * body.eq_rhs +
                                   t * (body.eq_coeffs * body.cheb_center))
                 : body.eq_rhs;
  s.outer_margin = delta * body.diameter_bound / body.inradius;
  return s;
}

namespace {

bool contains_impl(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                   const Eigen::MatrixXd& E, const Eigen::VectorXd& f,
                   const Eigen::VectorXd& x, double tol) {
  if (!x.allFinite()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (x(i) < -tol || x(i) > 1.0 + tol) return false;
  if (((A * x - b).array() > tol).any()) return false;
  if (E.rows() > 0 && ((E * x - f).cwiseAbs().array() > tol).any()) return false;
  return true;
}

}  // namespace

bool contains(const ConvexBody& body, const Eigen::VectorXd& x, double tol) {
  return contains_impl(body.ineq_coeffs, body.ineq_rhs, body.eq_coeffs,
                       body.eq_rhs, x, tol);
}

bool contains(const ShrunkenBody& body, const Eigen::VectorXd& x, double tol) {
  return contains_impl(body.parent->ineq_coeffs, body.ineq_rhs,
                       body.parent->eq_coeffs, body.eq_rhs, x, tol);
}

double violation(const ConvexBody& body, const Eigen::VectorXd& x) {
  double v = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    v = std::max(v, -x(i));
    v = std::max(v, x(i) - 1.0);
  }
  v = std::max(v, (body.ineq_coeffs * x - body.ineq_rhs).maxCoeff());
  if (body.eq_coeffs.rows() > 0)
    v = std::max(v, (body.eq_coeffs * x - body.eq_rhs).cwiseAbs().maxCoeff());
  return std::max(v, 0.0);
}

Eigen::VectorXd min_inf_norm_point(const ShrunkenBody& body, double tol) {
  const int d = body.parent->dim_ambient;
  const int q = static_cast<int>(body.ineq_rhs.size());
  // Variables (z, t): minimize t subject to z_i - t <= 0, -z_i - t <= 0 and
  // the body rows.
  LpProblem p;
  p.ineq_coeffs = Eigen::MatrixXd::Zero(q + 2 * d, d + 1);
  p.ineq_coeffs.topLeftCorner(q, d) = body.parent->ineq_coeffs;
  p.ineq_rhs.resize(q + 2 * d);
  p.ineq_rhs.head(q) = body.ineq_rhs;
  for (int i = 0; i < d; ++i) {
    p.ineq_coeffs(q + i, i) = 1.0;
    p.ineq_coeffs(q + i, d) = -1.0;
    p.ineq_coeffs(q + d + i, i) = -1.0;
    p.ineq_coeffs(q + d + i, d) = -1.0;
    p.ineq_rhs(q + i) = 0.0;
    p.ineq_rhs(q + d + i) = 0.0;
  }
  p.eq_coeffs.resize(body.parent->eq_coeffs.rows(), d + 1);
  if (p.eq_coeffs.rows() > 0) {
    p.eq_coeffs.leftCols(d) = body.parent->eq_coeffs;
    p.eq_coeffs.col(d).setZero();
  }
  p.eq_rhs = body.eq_rhs;
  p.objective = Eigen::VectorXd::Zero(d + 1);
  p.objective(d) = -1.0;

  return lp_solve_lex(p, tol).point.head(d);
}

}  // namespace drsubmax
