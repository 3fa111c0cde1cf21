#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "drsubmax/rng.hpp"

namespace drsubmax {

enum class ObjectiveKind { quadratic, coverage, custom };

/// A test objective with certified constants.  lipschitz / smoothness are
/// upper bounds on the true constants over [0,1]^d, which keeps every bound
/// that consumes them valid.  Immutable and shareable.
class Objective {
 public:
  ObjectiveKind kind = ObjectiveKind::quadratic;
  int dim = 0;

  // quadratic: F(x) = x.quad x / 2 + lin.x + constant
  Eigen::MatrixXd quad;
  Eigen::VectorXd lin;
  double constant = 0.0;

  // coverage: F(x) = sum_j w_j (1 - prod_{i in S_j} (1 - x_i))
  std::vector<std::vector<int>> cover_sets;
  Eigen::VectorXd cover_weights;

  std::function<double(const Eigen::VectorXd&)> custom_value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> custom_gradient;

  double lipschitz = 0.0;
  double smoothness = 0.0;
  bool monotone = false;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  void gradient_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
};

/// F(x) = x'Hx/2 + h0'x + c0, requiring H symmetric with every entry <= 0
/// (the diminishing-returns condition for a quadratic).  A constant offset is
/// added automatically when the minimum over the cube vertices is negative,
/// so the built objective is non-negative on [0,1]^d.
Objective make_dr_quadratic(const Eigen::MatrixXd& quadratic,
                            const Eigen::VectorXd& linear,
                            double constant = 0.0);

/// Weighted-coverage extension on up to 12 coordinates; always monotone.
Objective make_coverage(const std::vector<std::vector<int>>& sets,
                        const Eigen::VectorXd& weights, int dim);

/// Escape hatch for callers that bring their own value/gradient and certify
/// the constants themselves.
Objective make_custom(int dim,
                      std::function<double(const Eigen::VectorXd&)> value,
                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient,
                      double lipschitz, double smoothness, bool monotone);

/// Ball-average of the objective over radius delta inside the span of
/// hull_basis.
class SmoothedView {
 public:
  SmoothedView(const Objective& objective, double delta,
               const Eigen::MatrixXd& hull_basis)
      : objective_(&objective), delta_(delta), basis_(hull_basis) {}

  /// Exact for quadratics: F(x) + delta^2 / (2(k+2)) * trace(B'HB).
  double closed_form(const Eigen::VectorXd& x) const;

  struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
  };
  Estimate monte_carlo(const Eigen::VectorXd& x, int samples,
                       Xoshiro256& rng) const;

  double delta() const { return delta_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  const Objective* objective_;
  double delta_;
  Eigen::MatrixXd basis_;
};

}  // namespace drsubmax
