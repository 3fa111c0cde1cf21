#include "drsubmax/grad_estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace drsubmax {

void SphereSampler::sample_into(Eigen::VectorXd& u) {
  double norm_sq;
  do {
    for (int i = 0; i < coeffs_.size(); ++i) coeffs_(i) = rng_.normal();
    norm_sq = coeffs_.squaredNorm();
  } while (norm_sq < 1e-24);
  u.noalias() = basis_ * (coeffs_ / std::sqrt(norm_sq));
}

Eigen::VectorXd SphereSampler::sample() {
  Eigen::VectorXd u(basis_.rows());
  sample_into(u);
  return u;
}

Eigen::VectorXd two_point_gradient(OracleHandle& value_oracle,
                                   const Eigen::VectorXd& z, double delta,
                                   SphereSampler& sampler, int batch) {
  if (batch < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(delta > 0)) throw std::invalid_argument("sampling radius must be positive");
  const double scale = sampler.hull_dim() / (2.0 * delta);

  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  Eigen::VectorXd u(z.size()), probe(z.size());
  for (int i = 0; i < batch; ++i) {
    sampler.sample_into(u);
    probe = z + delta * u;
    const double up = value_oracle.value(probe);
    probe = z - delta * u;
    const double down = value_oracle.value(probe);
    g += scale * (up - down) * u;
  }
  return g / batch;
}

Eigen::VectorXd gradient_batch(OracleHandle& grad_oracle,
                               const Eigen::VectorXd& z, int batch,
                               const Eigen::MatrixXd& basis) {
  if (batch < 1) throw std::invalid_argument("batch size must be >= 1");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(z.size());
  Eigen::VectorXd sample(z.size());
  for (int i = 0; i < batch; ++i) {
    grad_oracle.gradient_into(z, sample);
    sum += sample;
  }
  sum /= batch;
  // Restrict to the hull; a no-op on full-dimensional bodies.
  if (basis.cols() < basis.rows()) return basis * (basis.transpose() * sum);
  return sum;
}

double momentum_weight(int n) { return 2.0 / std::pow(n + 3.0, 2.0 / 3.0); }

}  // namespace drsubmax
