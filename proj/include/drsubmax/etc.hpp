#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "drsubmax/frank_wolfe.hpp"
#include "drsubmax/geometry.hpp"
#include "drsubmax/objective.hpp"

namespace drsubmax {

enum class Feedback { semi_bandit, bandit };

struct EtcConfig {
  long horizon = 4;  // T
  Feedback feedback = Feedback::bandit;
  FwVariant variant = FwVariant::A_monotone_origin;
  double sigma0 = 0.0;  // bandit reward noise
  double sigma1 = 0.0;  // semi-bandit gradient noise
  std::uint64_t seed = 0;
  double lemma_c = 1.0;
  bool record_rounds = true;
};

struct EtcRound {
  long t = 0;
  Eigen::VectorXd action;
  double reward = 0.0;   // what the environment returned this round
  double f_exact = 0.0;  // side channel for regret accounting
};

struct RegretRecord {
  std::vector<EtcRound> rounds;      // when record_rounds
  long horizon = 0;
  long explore_rounds = 0;           // always exactly T0
  long rounds_played = 0;
  double exact_reward_sum = 0.0;     // sum over all rounds of exact F
  Eigen::VectorXd committed_point;
  double committed_value = 0.0;
  FwParams params;                   // exploration parameters actually used
  double alpha = 0.0;                // ratio of the configured variant
  double alpha_from_min_norm = 0.0;  // variant D ratio using min ||z||_inf over K
  double start_inf_norm = 0.0;
};

/// Exploration length: smallest integer m with m^4 >= T^3 (semi-bandit) or
/// m^6 >= T^5 (bandit).  Computed with exact integer comparisons so the
/// ceiling never suffers from floating-point rounding.
long horizon_split(long horizon, Feedback feedback);

/// Explore-then-commit: run the offline loop until exactly T0 oracle queries
/// are spent, playing every queried point as that round's action, then repeat
/// the last completed iterate for the remaining rounds.  A batch cut short by
/// the budget still plays its queries, but the iteration it belonged to is
/// discarded.
RegretRecord run_etc(const EtcConfig& config, const ConvexBody& body,
                     const Objective& objective);

/// alpha-regret against a fixed baseline value: alpha * T * F* minus the
/// exact-reward sum.  May be negative.
double regret(const RegretRecord& record, double baseline_value, double alpha);

}  // namespace drsubmax
