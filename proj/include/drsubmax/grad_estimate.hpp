#pragma once

#include <Eigen/Core>

#include "drsubmax/oracle.hpp"
#include "drsubmax/rng.hpp"

namespace drsubmax {

/// Uniform samples from the unit sphere intersected with span(hull_basis):
/// a standard normal draw in the k hull coordinates, mapped out and
/// normalized.
class SphereSampler {
 public:
  SphereSampler(const Eigen::MatrixXd& hull_basis, std::uint64_t seed,
                std::uint64_t stream = 0)
      : basis_(hull_basis),
        rng_(seed, stream),
        coeffs_(hull_basis.cols()) {}

  void sample_into(Eigen::VectorXd& u);
  Eigen::VectorXd sample();

  int hull_dim() const { return static_cast<int>(basis_.cols()); }

 private:
  Eigen::MatrixXd basis_;
  Xoshiro256 rng_;
  Eigen::VectorXd coeffs_;
};

/// Antithetic two-point estimate of the smoothed gradient restricted to the
/// hull: average over B sphere directions of
///   (k / 2 delta) * (F(z + delta u) - F(z - delta u)) * u,
/// where k is the hull dimension.  The k scaling (rather than the ambient
/// dimension) is what makes the estimator unbiased when the hull is a proper
/// subspace; the two coincide on full-dimensional bodies.  Consumes 2B value
/// queries.
Eigen::VectorXd two_point_gradient(OracleHandle& value_oracle,
                                   const Eigen::VectorXd& z, double delta,
                                   SphereSampler& sampler, int batch);

/// Average of B gradient-oracle samples, each projected onto span(basis).
Eigen::VectorXd gradient_batch(OracleHandle& grad_oracle,
                               const Eigen::VectorXd& z, int batch,
                               const Eigen::MatrixXd& basis);

/// Momentum weight 2/(n+3)^(2/3) for step n >= 1.
double momentum_weight(int n);

/// g_bar recurrence: g_bar_n = (1 - rho_n) g_bar_{n-1} + rho_n g_n, with
/// rho = 1 when the gradient oracle is exact (no averaging needed).
struct MomentumState {
  Eigen::VectorXd g_bar;
  int step_index = 0;
  bool deterministic = false;

  explicit MomentumState(int dim, bool deterministic_mode = false)
      : g_bar(Eigen::VectorXd::Zero(dim)), deterministic(deterministic_mode) {}

  void update(const Eigen::VectorXd& g) {
    ++step_index;
    const double rho = deterministic ? 1.0 : momentum_weight(step_index);
    g_bar *= (1.0 - rho);
    g_bar += rho * g;
  }
};

}  // namespace drsubmax
