#include "drsubmax/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "drsubmax/errors.hpp"

namespace drsubmax {

namespace {

constexpr int kMaxQuadraticDim = 16;  // vertex scans are 2^d
constexpr int kMaxCoverageDim = 12;

void check_domain(const Eigen::VectorXd& x, int dim) {
  if (x.size() != dim) throw OutOfDomainError("wrong dimension");
  for (int i = 0; i < dim; ++i)
    if (!(x(i) >= -1e-12 && x(i) <= 1.0 + 1e-12))
      throw OutOfDomainError("point outside the unit cube");
}

// Spectral norm of a symmetric matrix, certified from above.  Power
// iteration converges to |lambda|_max; the result is inflated slightly and
// capped against the Frobenius and max-row-sum bounds which are always valid.
double spectral_upper_bound(const Eigen::MatrixXd& m) {
  const int d = static_cast<int>(m.rows());
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = 1.0 + 1e-3 * (i + 1) / d;
  v.normalize();
  double lambda = 0.0;
  bool converged = false;
  Eigen::VectorXd next(d);
  for (int iter = 0; iter < 10000; ++iter) {
    next.noalias() = m * v;
    const double nn = next.norm();
    if (nn < 1e-300) return 0.0;
    v = next / nn;
    if (std::abs(nn - lambda) <= 1e-12 * std::max(1.0, nn)) {
      lambda = nn;
      converged = true;
      break;
    }
    lambda = nn;
  }
  const double frobenius = m.norm();
  const double row_sum = m.cwiseAbs().rowwise().sum().maxCoeff();
  const double safe = std::min(frobenius, row_sum);
  return converged ? std::min(lambda * (1.0 + 1e-6), safe) : safe;
}

}  // namespace

double Objective::value(const Eigen::VectorXd& x) const {
  check_domain(x, dim);
  switch (kind) {
    case ObjectiveKind::quadratic: {
      double s = constant + lin.dot(x);
      for (int i = 0; i < dim; ++i) s += 0.5 * x(i) * quad.row(i).dot(x);
      return s;
    }
    case ObjectiveKind::coverage: {
      double s = 0.0;
      for (std::size_t j = 0; j < cover_sets.size(); ++j) {
        double miss = 1.0;
        for (int i : cover_sets[j]) miss *= 1.0 - x(i);
        s += cover_weights(j) * (1.0 - miss);
      }
      return s;
    }
    case ObjectiveKind::custom:
      return custom_value(x);
  }
  return 0.0;
}

void Objective::gradient_into(const Eigen::VectorXd& x, Eigen::VectorXd& out) const {
  check_domain(x, dim);
  switch (kind) {
    case ObjectiveKind::quadratic:
      out = lin;
      out.noalias() += quad * x;
      return;
    case ObjectiveKind::coverage: {
      out.setZero(dim);
      for (std::size_t j = 0; j < cover_sets.size(); ++j) {
        const auto& set = cover_sets[j];
        for (std::size_t a = 0; a < set.size(); ++a) {
          double partial = cover_weights(j);
          for (std::size_t b = 0; b < set.size(); ++b)
            if (b != a) partial *= 1.0 - x(set[b]);
          out(set[a]) += partial;
        }
      }
      return;
    }
    case ObjectiveKind::custom:
      out = custom_gradient(x);
      return;
  }
}

Eigen::VectorXd Objective::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(dim);
  gradient_into(x, g);
  return g;
}

Objective make_dr_quadratic(const Eigen::MatrixXd& quadratic,
                            const Eigen::VectorXd& linear, double constant) {
  const int d = static_cast<int>(linear.size());
  if (quadratic.rows() != d || quadratic.cols() != d)
    throw std::invalid_argument("quadratic matrix shape mismatch");
  if (d > kMaxQuadraticDim)
    throw DimensionTooLargeError("quadratic objective limited to 16 coordinates");
  if (((quadratic - quadratic.transpose()).cwiseAbs().array() > 1e-12).any())
    throw std::invalid_argument("quadratic matrix must be symmetric");
  if ((quadratic.array() > 1e-12).any())
    throw std::invalid_argument(
        "quadratic matrix must be entrywise nonpositive for diminishing returns");

  Objective f;
  f.kind = ObjectiveKind::quadratic;
  f.dim = d;
  f.quad = quadratic;
  f.lin = linear;
  f.constant = constant;

  // Vertex scans: the quadratic is concave along each coordinate, so its
  // minimum over the cube sits at a vertex; |gradient| is convex, so its
  // maximum does too.
  double min_value = std::numeric_limits<double>::infinity();
  double max_grad = 0.0;
  Eigen::VectorXd vertex(d), grad(d);
  for (std::uint64_t mask = 0; mask < (1ULL << d); ++mask) {
    for (int i = 0; i < d; ++i) vertex(i) = (mask >> i) & 1 ? 1.0 : 0.0;
    double v = constant + linear.dot(vertex);
    for (int i = 0; i < d; ++i) v += 0.5 * vertex(i) * quadratic.row(i).dot(vertex);
    min_value = std::min(min_value, v);
    grad = linear;
    grad.noalias() += quadratic * vertex;
    max_grad = std::max(max_grad, grad.norm());
  }
  if (min_value < 0.0) f.constant = constant - min_value;

  f.lipschitz = max_grad;
  f.smoothness = spectral_upper_bound(quadratic);
  // Entrywise nonpositive quad means the gradient is smallest at the all-ones
  // vertex.
  f.monotone =
      ((quadratic * Eigen::VectorXd::Ones(d) + linear).array() >= -1e-12).all();
  return f;
}

Objective make_coverage(const std::vector<std::vector<int>>& sets,
                        const Eigen::VectorXd& weights, int dim) {
  if (dim > kMaxCoverageDim)
    throw DimensionTooLargeError("coverage objective limited to 12 coordinates");
  if (static_cast<Eigen::Index>(sets.size()) != weights.size())
    throw std::invalid_argument("sets/weights length mismatch");
  if ((weights.array() < 0).any())
    throw std::invalid_argument("coverage weights must be non-negative");
  for (const auto& s : sets)
    for (int i : s)
      if (i < 0 || i >= dim) throw std::invalid_argument("set element out of range");

  Objective f;
  f.kind = ObjectiveKind::coverage;
  f.dim = dim;
  f.cover_sets = sets;
  f.cover_weights = weights;
  f.monotone = true;

  Eigen::VectorXd per_coord = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd pair_bound = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (int a : sets[j]) {
      per_coord(a) += weights(j);
      for (int b : sets[j])
        if (a != b) pair_bound(a, b) += weights(j);
    }
  }
  f.lipschitz = per_coord.norm();
  f.smoothness = std::max(pair_bound.norm(), 1e-12);
  return f;
}

Objective make_custom(int dim,
                      std::function<double(const Eigen::VectorXd&)> value,
                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient,
                      double lipschitz, double smoothness, bool monotone) {
  Objective f;
  f.kind = ObjectiveKind::custom;
  f.dim = dim;
  f.custom_value = std::move(value);
  f.custom_gradient = std::move(gradient);
  f.lipschitz = lipschitz;
  f.smoothness = smoothness;
  f.monotone = monotone;
  return f;
}

double SmoothedView::closed_form(const Eigen::VectorXd& x) const {
  if (objective_->kind != ObjectiveKind::quadratic)
    throw std::invalid_argument("closed-form smoothing needs a quadratic objective");
  const int k = static_cast<int>(basis_.cols());
  const double curvature = (basis_.transpose() * objective_->quad * basis_).trace();
  return objective_->value(x) + delta_ * delta_ / (2.0 * (k + 2)) * curvature;
}

SmoothedView::Estimate SmoothedView::monte_carlo(const Eigen::VectorXd& x,
                                                 int samples,
                                                 Xoshiro256& rng) const {
  const int k = static_cast<int>(basis_.cols());
  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd w(k), point(x.size());
  for (int s = 0; s < samples; ++s) {
    double norm_sq;
    do {
      for (int i = 0; i < k; ++i) w(i) = rng.normal();
      norm_sq = w.squaredNorm();
    } while (norm_sq < 1e-24);
    // Uniform in the unit k-ball: direction times U^(1/k).
    const double radius = std::pow(rng.uniform01(), 1.0 / k) / std::sqrt(norm_sq);
    point = x;
    point.noalias() += basis_ * (delta_ * radius * w);
    const double v = objective_->value(point);
    sum += v;
    sum_sq += v * v;
  }
  Estimate e;
  e.mean = sum / samples;
  const double var = std::max(0.0, sum_sq / samples - e.mean * e.mean);
  e.std_error = std::sqrt(var / samples);
  return e;
}

}  // namespace drsubmax
