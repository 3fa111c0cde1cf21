#include "drsubmax/lmo.hpp"

#include <stdexcept>

#include "drsubmax/simplex.hpp"

namespace drsubmax {

Eigen::VectorXd lmo(const ShrunkenBody& body, const LmoQuery& query, double tol) {
  if (!query.direction.allFinite())
    throw std::invalid_argument("non-finite LMO direction");
  const int d = body.parent->dim_ambient;

  LpProblem p = body_lp(body);
  p.objective = query.direction;
  if (query.upper_cap) {
    // v <= cap becomes z <= base_shift + cap.
    const Eigen::VectorXd bound = query.base_shift + *query.upper_cap;
    const auto q = p.ineq_coeffs.rows();
    p.ineq_coeffs.conservativeResize(q + d, d);
    p.ineq_coeffs.bottomRows(d) = Eigen::MatrixXd::Identity(d, d);
    p.ineq_rhs.conservativeResize(q + d);
    p.ineq_rhs.tail(d) = bound;
  }
  return lp_solve_lex(p, tol).point - query.base_shift;
}

}  // namespace drsubmax
