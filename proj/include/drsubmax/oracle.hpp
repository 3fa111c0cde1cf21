#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "drsubmax/geometry.hpp"
#include "drsubmax/objective.hpp"
#include "drsubmax/rng.hpp"

namespace drsubmax {

enum class OracleKind { grad_det, grad_stoch, value_det, value_stoch };

/// Wraps an objective behind one of the four oracle access types.  Every
/// query point is checked against the feasible body first; a miss throws
/// InfeasibleQueryError, because it always means the calling algorithm is
/// broken.  Noise is additive Gaussian: value noise has standard deviation
/// sigma, gradient noise is scaled so the expected squared norm of the
/// perturbation equals sigma^2.
///
/// Single-consumer: the query ledger and the stream advance on every sample.
/// For concurrent batches, split() derives independently seeded substreams.
class OracleHandle {
 public:
  OracleHandle(const Objective& objective, const ConvexBody& body,
               OracleKind kind, double sigma, std::uint64_t seed,
               std::uint64_t stream = 0, double guard_tol = 1e-9)
      : objective_(&objective),
        body_(&body),
        kind_(kind),
        sigma_(sigma),
        rng_(seed, stream),
        seed_(seed),
        guard_tol_(guard_tol) {}

  double value(const Eigen::VectorXd& z);
  Eigen::VectorXd gradient(const Eigen::VectorXd& z);
  void gradient_into(const Eigen::VectorXd& z, Eigen::VectorXd& out);

  OracleHandle split(std::uint64_t stream_id) const {
    return OracleHandle(*objective_, *body_, kind_, sigma_, seed_,
                        stream_id + 1, guard_tol_);
  }

  OracleKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  long query_count() const { return query_count_; }
  const Objective& objective() const { return *objective_; }
  const ConvexBody& body() const { return *body_; }

 private:
  void guard(const Eigen::VectorXd& z) const;

  const Objective* objective_;
  const ConvexBody* body_;
  OracleKind kind_;
  double sigma_;
  Xoshiro256 rng_;
  std::uint64_t seed_;
  double guard_tol_;
  long query_count_ = 0;
};

}  // namespace drsubmax
