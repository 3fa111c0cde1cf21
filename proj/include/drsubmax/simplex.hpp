#pragma once

#include <Eigen/Core>

namespace drsubmax {

/// max  objective . x
/// s.t. ineq_coeffs x <= ineq_rhs,  eq_coeffs x = eq_rhs,  x >= 0.
///
/// Every feasible region handled by this project lives inside [0,1]^d with
/// the cube rows folded into ineq_coeffs, so the nonnegativity convention and
/// boundedness both hold by construction.
struct LpProblem {
  Eigen::MatrixXd ineq_coeffs;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_coeffs;   // 0 x n when absent
  Eigen::VectorXd eq_rhs;
  Eigen::VectorXd objective;

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add_ineq(const Eigen::VectorXd& row, double rhs);
};

struct LpSolution {
  Eigen::VectorXd point;  // a vertex optimum
  double value = 0.0;
  bool unique = false;    // true when no alternate optimal vertex exists
};

/// Dense two-phase primal simplex.  Dantzig's rule, switching to Bland's rule
/// permanently after 3*(rows) consecutive degenerate pivots; one full-Bland
/// retry before giving up.
///
/// Throws InfeasibleError / NumericalFailureError.
LpSolution lp_solve(const LpProblem& problem, double tol = 1e-9);

/// Same, but ties are broken to the lexicographically smallest optimizer via
/// sequential restriction: pin the objective to its optimum, then minimize
/// x_0, pin it, minimize x_1, ...  Skipped entirely when the first solve
/// proves its vertex unique.
LpSolution lp_solve_lex(const LpProblem& problem, double tol = 1e-9);

}  // namespace drsubmax
