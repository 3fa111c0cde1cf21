#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "drsubmax/geometry.hpp"
#include "drsubmax/grad_estimate.hpp"
#include "drsubmax/lmo.hpp"
#include "drsubmax/objective.hpp"
#include "drsubmax/oracle.hpp"

namespace drsubmax {

/// The four (function, feasible set) regimes.  A and B walk upward from a
/// point near the origin with update z + eps*v; C and D blend with update
/// (1-eps) z + eps v and need no structural flags.
enum class FwVariant {
  A_monotone_origin,
  B_nonmonotone_down_closed,
  C_monotone_general,
  D_nonmonotone_general,
};

/// Oracle access regimes: 1 exact gradient, 2 stochastic gradient, 3 exact
/// value, 4 stochastic value.
enum class OracleCase : int {
  det_grad = 1,
  stoch_grad = 2,
  det_value = 3,
  stoch_value = 4,
};

struct FwConfig {
  FwVariant variant = FwVariant::A_monotone_origin;
  OracleCase oracle_case = OracleCase::det_grad;
  int iterations = 4;   // N >= 4
  int batch = 1;        // B >= 1
  double delta = 0.0;   // 0 for gradient oracles, in (0, r) for value oracles
  std::uint64_t seed = 0;
  double sigma0 = 0.0;  // value-oracle noise
  double sigma1 = 0.0;  // gradient-oracle noise
  bool record_iterates = true;
};

struct FwIterate {
  int n = 0;
  Eigen::VectorXd z;
  Eigen::VectorXd v;
  double g_bar_norm = 0.0;
  double f_exact = 0.0;       // side channel, not an oracle query
  double grad_err_sq = 0.0;   // |P grad F(z) - g_bar|^2 diagnostic
  long queries = 0;
};

struct Trajectory {
  std::vector<FwIterate> iterates;
  Eigen::VectorXd final_point;
  double final_value = 0.0;   // exact F at the final point
  long total_queries = 0;
  double max_violation = 0.0; // worst constraint violation over all iterates
  Eigen::VectorXd start_point;
};

/// Step size per variant: 1/N for A and B, log(N)/2N for C, log(2)/N for D
/// (natural logs).
double epsilon_for(FwVariant variant, int iterations);

/// Dispatches the per-variant linear subproblem: A maximizes over the body
/// shifted by the start point, B additionally caps at 1 - z_n, C and D use
/// the body unshifted.
Eigen::VectorXd optimal_direction(FwVariant variant, const ShrunkenBody& body,
                                  const Eigen::VectorXd& g_bar,
                                  const Eigen::VectorXd& z_n,
                                  const Eigen::VectorXd& z_1);

/// z + eps*v for A/B, (1-eps) z + eps v for C/D.
Eigen::VectorXd update_step(FwVariant variant, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double eps);

/// Runs the full loop: shrink, start at the min sup-norm point, then
/// estimate-gradient / momentum / direction / update for N rounds.
/// Deterministic given the seed.
Trajectory run_offline(const FwConfig& config, const ConvexBody& body,
                       const Objective& objective);

struct BoundConstants {
  double lipschitz = 0.0;   // G
  double smoothness = 0.0;  // L
  double diameter = 0.0;    // D
  int dim = 0;              // d
  double inradius = 0.0;    // r
  double sigma = 0.0;       // oracle noise for the active case
  double lemma_c = 1.0;     // estimator second-moment constant
};

struct FwParams {
  int iterations = 4;
  int batch = 1;
  double delta = 0.0;
};

/// Smallest (N, B, delta) for which the error bound of the given variant
/// drops below eps_target, splitting the target evenly across the bound's
/// active additive terms.  Throws TargetTooTightError when the required
/// sampling radius would reach the inradius.  delta_cap, when positive, caps
/// the sampling radius instead of throwing (the explore-then-commit budget
/// search needs coarse targets whose nominal radius would be enormous).
FwParams params_for_target(OracleCase oracle_case, FwVariant variant,
                           double eps_target, const BoundConstants& constants,
                           double delta_cap = 0.0);

/// Momentum quality constant for the error bounds: 0 for the exact-gradient
/// case, otherwise max{4^(2/3) G^2, 6 L^2 D^2 + 4 sigma_eff^2 / B} where
/// sigma_eff^2 is the per-estimate second moment for the active oracle.
double momentum_quality(OracleCase oracle_case, const BoundConstants& constants,
                        int batch, double delta);

/// Value of the error bound (everything subtracted from alpha * F*) for the
/// given variant and parameters.
double error_bound(FwVariant variant, OracleCase oracle_case,
                   const BoundConstants& constants, int iterations, int batch,
                   double delta);

/// Approximation ratio per variant; variant D depends on the sup norm of the
/// start point.
double approx_ratio(FwVariant variant, double start_inf_norm = 0.0);

}  // namespace drsubmax
