#include "drsubmax/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "drsubmax/errors.hpp"

namespace drsubmax {

void LpProblem::add_ineq(const Eigen::VectorXd& row, double rhs) {
  const auto q = ineq_coeffs.rows();
  ineq_coeffs.conservativeResize(q + 1, row.size());
  ineq_coeffs.row(q) = row.transpose();
  ineq_rhs.conservativeResize(q + 1);
  ineq_rhs(q) = rhs;
}

namespace {

struct StallError {};  // internal: pivot loop hit its iteration cap

class Tableau {
 public:
  Tableau(const LpProblem& p, double tol) : tol_(tol) {
    n_ = p.num_vars();
    const int q = static_cast<int>(p.ineq_rhs.size());
    const int m = q + static_cast<int>(p.eq_rhs.size());
    m_ = m;
    // Columns: structural | slacks | artificials (added lazily) | rhs.
    num_slack_ = q;
    rows_ = Eigen::MatrixXd::Zero(m, n_ + q);
    rhs_ = Eigen::VectorXd::Zero(m);
    basis_.assign(m, -1);

    for (int i = 0; i < q; ++i) {
      rows_.row(i).head(n_) = p.ineq_coeffs.row(i);
      rows_(i, n_ + i) = 1.0;
      rhs_(i) = p.ineq_rhs(i);
    }
    for (int i = q; i < m; ++i) {
      rows_.row(i).head(n_) = p.eq_coeffs.row(i - q);
      rhs_(i) = p.eq_rhs(i - q);
    }
    // Sign-normalize so rhs >= 0, then pick an initial basis: a slack where
    // its coefficient survived as +1, otherwise an artificial.
    std::vector<int> needs_artificial;
    for (int i = 0; i < m; ++i) {
      if (rhs_(i) < 0) {
        rows_.row(i) = -rows_.row(i);
        rhs_(i) = -rhs_(i);
      }
      if (i < q && rows_(i, n_ + i) > 0.5) {
        basis_[i] = n_ + i;
      } else {
        needs_artificial.push_back(i);
      }
    }
    first_artificial_ = n_ + num_slack_;
    const int n_art = static_cast<int>(needs_artificial.size());
    rows_.conservativeResize(m, first_artificial_ + n_art);
    rows_.rightCols(n_art).setZero();
    for (int a = 0; a < n_art; ++a) {
      const int i = needs_artificial[a];
      rows_(i, first_artificial_ + a) = 1.0;
      basis_[i] = first_artificial_ + a;
    }
    total_cols_ = first_artificial_ + n_art;
    in_basis_.assign(total_cols_, 0);
    for (int i = 0; i < m_; ++i) in_basis_[basis_[i]] = 1;
  }

  // Solves both phases; fills point/value/unique.
  LpSolution run(const LpProblem& p, bool force_bland) {
    bland_ = force_bland;
    degenerate_streak_ = 0;

    if (first_artificial_ < total_cols_) {
      // Phase 1: maximize -sum(artificials).
      Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_cols_);
      cost.tail(total_cols_ - first_artificial_).setConstant(-1.0);
      build_objective(cost);
      artificial_banned_ = false;
      pivot_loop();
      const double infeas = -objective_value_;
      if (infeas > feas_tol()) throw InfeasibleError("LP infeasible");
      evict_basic_artificials();
    }
    artificial_banned_ = true;

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_cols_);
    cost.head(n_) = p.objective;
    build_objective(cost);
    pivot_loop();

    LpSolution sol;
    sol.point = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) sol.point(basis_[i]) = rhs_(i);
    }
    sol.value = p.objective.dot(sol.point);
    sol.unique = true;
    for (int j = 0; j < total_cols_; ++j) {
      if (j >= first_artificial_) continue;
      if (is_basic(j)) continue;
      if (reduced_(j) > -tol_) {
        sol.unique = false;
        break;
      }
    }
    return sol;
  }

 private:
  double feas_tol() const { return tol_ * 1e3 * (1.0 + rhs_.cwiseAbs().maxCoeff()); }

  bool is_basic(int col) const { return in_basis_[col] != 0; }

  void build_objective(const Eigen::VectorXd& cost) {
    cost_ = cost;
    reduced_ = cost;
    objective_value_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_(basis_[i]);
      if (cb != 0.0) {
        reduced_ -= cb * rows_.row(i).transpose();
        objective_value_ += cb * rhs_(i);
      }
    }
  }

  int pick_entering() const {
    int best = -1;
    double best_val = tol_;
    for (int j = 0; j < total_cols_; ++j) {
      if (artificial_banned_ && j >= first_artificial_) continue;
      const double r = reduced_(j);
      if (r <= tol_) continue;
      if (is_basic(j)) continue;
      if (bland_) return j;
      if (r > best_val) {
        best_val = r;
        best = j;
      }
    }
    return best;
  }

  // Leaving row: min ratio; ties go to the smallest basis variable index,
  // which keeps Bland's rule valid when it is active.
  int pick_leaving(int enter) const {
    int best = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double piv = rows_(i, enter);
      if (piv <= tol_) continue;
      const double ratio = rhs_(i) / piv;
      if (best < 0 || ratio < best_ratio - tol_ ||
          (ratio < best_ratio + tol_ && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(int row, int col) {
    const double piv = rows_(row, col);
    rows_.row(row) /= piv;
    rhs_(row) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = rows_(i, col);
      if (factor != 0.0) {
        rows_.row(i) -= factor * rows_.row(row);
        rhs_(i) -= factor * rhs_(row);
        rows_(i, col) = 0.0;
      }
    }
    const double rfac = reduced_(col);
    if (rfac != 0.0) {
      reduced_ -= rfac * rows_.row(row).transpose();
      objective_value_ += rfac * rhs_(row);
      reduced_(col) = 0.0;
    }
    in_basis_[basis_[row]] = 0;
    in_basis_[col] = 1;
    basis_[row] = col;
  }

  void pivot_loop() {
    const long cap = 2000 + 200L * (m_ + total_cols_);
    for (long iter = 0; iter < cap; ++iter) {
      const int enter = pick_entering();
      if (enter < 0) return;  // optimal
      const int leave = pick_leaving(enter);
      if (leave < 0) throw NumericalFailureError("LP unbounded");
      const bool degenerate = rhs_(leave) <= tol_;
      pivot(leave, enter);
      if (degenerate) {
        if (++degenerate_streak_ > 3 * m_) bland_ = true;
      } else {
        degenerate_streak_ = 0;
      }
    }
    throw StallError{};
  }

  // After phase 1 any artificial still basic sits at level ~0; swap it for a
  // real column when one is available, otherwise the row is redundant and the
  // zero-level artificial is harmless.
  void evict_basic_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (int j = 0; j < first_artificial_; ++j) {
        if (std::abs(rows_(i, j)) > 1e3 * tol_ && !is_basic(j)) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  int n_ = 0, m_ = 0, num_slack_ = 0, first_artificial_ = 0, total_cols_ = 0;
  double tol_;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd cost_;
  Eigen::VectorXd reduced_;
  double objective_value_ = 0.0;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  bool bland_ = false;
  bool artificial_banned_ = false;
  int degenerate_streak_ = 0;
};

}  // namespace

LpSolution lp_solve(const LpProblem& problem, double tol) {
  try {
    Tableau t(problem, tol);
    return t.run(problem, /*force_bland=*/false);
  } catch (const StallError&) {
    try {
      Tableau t(problem, tol);
      return t.run(problem, /*force_bland=*/true);
    } catch (const StallError&) {
      throw NumericalFailureError("LP pivoting stalled after Bland retry");
    }
  }
}

LpSolution lp_solve_lex(const LpProblem& problem, double tol) {
  LpSolution sol = lp_solve(problem, tol);
  if (sol.unique) return sol;

  const double pin = std::max(tol, 1e-12 * std::abs(sol.value));
  LpProblem restricted = problem;
  restricted.add_ineq(-problem.objective, -(sol.value - pin));

  const int n = problem.num_vars();
  Eigen::VectorXd coordinate_obj = Eigen::VectorXd::Zero(n);
  LpSolution last = sol;
  for (int j = 0; j < n; ++j) {
    coordinate_obj.setZero();
    coordinate_obj(j) = -1.0;
    restricted.objective = coordinate_obj;
    last = lp_solve(restricted, tol);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    row(j) = 1.0;
    restricted.add_ineq(row, last.point(j) + pin);
  }
  last.value = problem.objective.dot(last.point);
  last.unique = sol.unique;
  return last;
}

}  // namespace drsubmax
