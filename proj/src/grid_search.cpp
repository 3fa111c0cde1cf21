#include "drsubmax/grid_search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "drsubmax/errors.hpp"
#include "drsubmax/simplex.hpp"

namespace drsubmax {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-12) return true;
    if (a(i) > b(i) + 1e-12) return false;
  }
  return false;
}

}  // namespace

GridResult grid_maximize(const Objective& objective, const ConvexBody& body,
                         int resolution) {
  if (resolution < 2) throw std::invalid_argument("need at least 2 grid points");
  const int k = body.hull_dim;
  const int d = body.dim_ambient;
  if (std::pow(static_cast<double>(resolution), k) > 1e8)
    throw GridTooLargeError("grid would exceed 1e8 points");

  // Per-axis ranges of the hull coordinates w, where x = center + B w.
  LpProblem p = body_lp(body);
  Eigen::VectorXd lo(k), hi(k);
  for (int j = 0; j < k; ++j) {
    p.objective = body.hull_basis.col(j);
    hi(j) = lp_solve(p).value - body.hull_basis.col(j).dot(body.cheb_center);
    p.objective = -body.hull_basis.col(j);
    lo(j) = -lp_solve(p).value - body.hull_basis.col(j).dot(body.cheb_center);
  }

  double span_sq = 0.0;
  for (int j = 0; j < k; ++j) {
    const double step = (hi(j) - lo(j)) / (resolution - 1);
    span_sq += step * step;
  }

  GridResult best;
  best.value = -std::numeric_limits<double>::infinity();
  best.gap_bound = objective.lipschitz * std::sqrt(span_sq);

  std::vector<int> idx(k, 0);
  Eigen::VectorXd w(k), x(d);
  bool any = false;
  while (true) {
    for (int j = 0; j < k; ++j)
      w(j) = lo(j) + (hi(j) - lo(j)) * idx[j] / (resolution - 1);
    x = body.cheb_center + body.hull_basis * w;
    for (int i = 0; i < d; ++i) x(i) = std::min(1.0, std::max(0.0, x(i)));
    if (contains(body, x, 1e-9)) {
      const double v = objective.value(x);
      if (!any || v > best.value + 1e-15 ||
          (std::abs(v - best.value) <= 1e-15 && lex_less(x, best.maximizer))) {
        best.value = v;
        best.maximizer = x;
        any = true;
      }
    }
    int j = k - 1;
    while (j >= 0 && ++idx[j] == resolution) idx[j--] = 0;
    if (j < 0) break;
  }
  if (!any) {
    // Always at least one feasible candidate: the deep center itself.
    best.maximizer = body.cheb_center;
    best.value = objective.value(best.maximizer);
  }
  return best;
}

}  // namespace drsubmax
