#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "drsubmax/simplex.hpp"

namespace drsubmax {

/// Polytope K = {x : Ax <= b, Ex = f} inside [0,1]^d, with the cached
/// quantities every algorithm in this library reads off it.  Immutable after
/// build_body; safe to share across threads read-only.
struct ConvexBody {
  Eigen::MatrixXd ineq_coeffs;  // cube rows folded in
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_coeffs;    // user equalities plus implied ones
  Eigen::VectorXd eq_rhs;
  int dim_ambient = 0;

  Eigen::MatrixXd hull_basis;   // d x k, orthonormal columns spanning aff(K) - anchor
  int hull_dim = 0;
  Eigen::VectorXd cheb_center;  // anchor point; deepest point of K within aff(K)
  double inradius = 0.0;
  double diameter_bound = 0.0;  // exact when vertices enumerable, else sqrt(d)
  double min_inf_norm = 0.0;    // min over K of the sup norm

  bool contains_origin = false;
  bool down_closed = false;

  std::vector<Eigen::VectorXd> vertices;  // populated when enumeration was cheap
};

/// K shrunk toward the deep center: same constraint matrix, translated
/// right-hand sides.  Keeps a pointer to the parent, which must outlive it.
struct ShrunkenBody {
  const ConvexBody* parent = nullptr;
  double delta = 0.0;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd eq_rhs;
  double outer_margin = 0.0;  // delta * diameter / inradius
};

struct BodyFlags {
  bool down_closed = false;
};

struct AffineHull {
  Eigen::VectorXd anchor;
  Eigen::MatrixXd basis;  // d x k orthonormal
  int dim = 0;
  std::vector<int> implied_rows;  // inequality rows tight on all of K
};

/// Builds the body and caches hull, center, inradius, diameter, min inf-norm
/// and the origin flag.  Unit-cube rows are appended automatically.
/// Throws InfeasibleError / DegenerateHullError.
ConvexBody build_body(const Eigen::MatrixXd& ineq_coeffs,
                      const Eigen::VectorXd& ineq_rhs,
                      const Eigen::MatrixXd& eq_coeffs,
                      const Eigen::VectorXd& eq_rhs,
                      int dim,
                      const BodyFlags& flags = {},
                      double tol = 1e-9);

/// Affine hull of the system (cube rows assumed already present).  Detects
/// implied equalities: a row is folded into the hull when both the max and
/// the min of a_i.x over K equal b_i within tol_implied.
AffineHull affine_hull(const Eigen::MatrixXd& ineq_coeffs,
                       const Eigen::VectorXd& ineq_rhs,
                       const Eigen::MatrixXd& eq_coeffs,
                       const Eigen::VectorXd& eq_rhs,
                       double tol = 1e-9,
                       double tol_implied = 1e-7);

/// Deepest point of the body within its affine hull: maximizes r subject to
/// a_i.c + r * |P a_i| <= b_i over all rows, solved as a single LP with the
/// lexicographically smallest optimizer.  Returns (center, inradius).
std::pair<Eigen::VectorXd, double> chebyshev_center(
    const Eigen::MatrixXd& ineq_coeffs, const Eigen::VectorXd& ineq_rhs,
    const Eigen::MatrixXd& eq_coeffs, const Eigen::VectorXd& eq_rhs,
    const Eigen::MatrixXd& hull_basis, double tol = 1e-9);

/// K_delta: rhs' = (1 - delta/r) b + (delta/r) A c  (same for equalities).
/// Throws DeltaTooLargeError when delta >= inradius; delta == 0 returns a
/// view identical to the parent.
ShrunkenBody shrink(const ConvexBody& body, double delta);

bool contains(const ConvexBody& body, const Eigen::VectorXd& x, double tol);
bool contains(const ShrunkenBody& body, const Eigen::VectorXd& x, double tol);

/// Largest violation across all constraints (0 when inside).
double violation(const ConvexBody& body, const Eigen::VectorXd& x);

/// argmin over the shrunken body of the sup norm, via one LP (min t subject
/// to -t <= z_i <= t); ties broken lexicographically on z.
Eigen::VectorXd min_inf_norm_point(const ShrunkenBody& body, double tol = 1e-9);

/// Base LP over the body's constraint rows with a zero objective; callers
/// fill in the objective.
LpProblem body_lp(const ConvexBody& body);
LpProblem body_lp(const ShrunkenBody& body);

/// All vertices, in hull coordinates mapped back to ambient space.  Empty
/// optional when the subset count or vertex count exceeds the caps.
std::optional<std::vector<Eigen::VectorXd>> enumerate_vertices(
    const ConvexBody& body, std::size_t max_vertices = 4096,
    std::size_t max_subsets = 2000000);

}  // namespace drsubmax
