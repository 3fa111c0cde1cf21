#include "drsubmax/etc.hpp"

#include <cmath>
#include <stdexcept>

#include "drsubmax/errors.hpp"

namespace drsubmax {

namespace {

// m^a >= T^b with exact integer arithmetic for moderate horizons.
bool power_at_least(long m, int a, long t, int b) {
  if (t <= 10'000'000L) {
    __int128 lhs = 1, rhs = 1;
    for (int i = 0; i < a; ++i) lhs *= m;
    for (int i = 0; i < b; ++i) rhs *= t;
    return lhs >= rhs;
  }
  return static_cast<long double>(a) * logl(static_cast<long double>(m)) >=
         static_cast<long double>(b) * logl(static_cast<long double>(t));
}

}  // namespace

long horizon_split(long horizon, Feedback feedback) {
  if (horizon < 4) throw std::invalid_argument("horizon must be at least 4");
  const int num = feedback == Feedback::bandit ? 5 : 3;
  const int den = feedback == Feedback::bandit ? 6 : 4;
  long m = static_cast<long>(
      std::floor(std::pow(static_cast<double>(horizon),
                          static_cast<double>(num) / den))) -
           2;
  if (m < 1) m = 1;
  while (!power_at_least(m, den, horizon, num)) ++m;
  return m;
}

double regret(const RegretRecord& record, double baseline_value, double alpha) {
  return alpha * static_cast<double>(record.horizon) * baseline_value -
         record.exact_reward_sum;
}

namespace {

struct RoundLogger {
  RegretRecord* record;
  bool keep_rounds;

  void play(long t, const Eigen::VectorXd& action, double reward,
            double f_exact) {
    record->exact_reward_sum += f_exact;
    ++record->rounds_played;
    if (keep_rounds) {
      EtcRound r;
      r.t = t;
      r.action = action;
      r.reward = reward;
      r.f_exact = f_exact;
      record->rounds.push_back(std::move(r));
    }
  }
};

}  // namespace

RegretRecord run_etc(const EtcConfig& config, const ConvexBody& body,
                     const Objective& objective) {
  if (config.horizon < 4) throw std::invalid_argument("horizon must be at least 4");
  const long horizon = config.horizon;
  const long explore_budget = horizon_split(horizon, config.feedback);
  const bool bandit = config.feedback == Feedback::bandit;
  const OracleCase oracle_case =
      bandit ? OracleCase::stoch_value : OracleCase::stoch_grad;

  BoundConstants consts;
  consts.lipschitz = objective.lipschitz;
  consts.smoothness = objective.smoothness;
  consts.diameter = body.diameter_bound;
  consts.dim = body.dim_ambient;
  consts.inradius = body.inradius;
  consts.sigma = bandit ? config.sigma0 : config.sigma1;
  consts.lemma_c = config.lemma_c;

  // Find the tightest accuracy target whose parameters fit the exploration
  // budget.  Cost per target is the total oracle-query count.
  const double scale = std::max(1.0, consts.lipschitz * consts.diameter);
  const double delta_cap = 0.9 * consts.inradius;
  auto query_cost = [&](const FwParams& p) -> long {
    const long per_iter = bandit ? 2L * p.batch : p.batch;
    return per_iter * static_cast<long>(p.iterations);
  };
  FwParams params;
  bool found = false;
  for (double eps = 1e-4 * scale; eps <= 128.0 * scale; eps *= 1.07) {
    params = params_for_target(oracle_case, config.variant, eps, consts, delta_cap);
    if (query_cost(params) <= explore_budget) {
      found = true;
      break;
    }
  }
  if (!found) {
    // Budget too small for even the coarsest inverted target; explore with
    // the minimum iteration count and whatever batch fits.
    params.iterations = 4;
    params.batch = std::max(
        1L, explore_budget / (bandit ? 2L * params.iterations : params.iterations));
    params.delta = bandit ? 0.5 * consts.inradius : 0.0;
  }
  if (!bandit) params.delta = 0.0;

  RegretRecord record;
  record.horizon = horizon;
  record.explore_rounds = explore_budget;
  record.params = params;
  if (config.record_rounds) record.rounds.reserve(horizon);
  RoundLogger log{&record, config.record_rounds};

  const ShrunkenBody shrunken = shrink(body, params.delta);
  const Eigen::VectorXd z_1 = min_inf_norm_point(shrunken);
  record.start_inf_norm = z_1.size() > 0 ? z_1.cwiseAbs().maxCoeff() : 0.0;
  record.alpha = approx_ratio(config.variant, record.start_inf_norm);
  record.alpha_from_min_norm = approx_ratio(config.variant, body.min_inf_norm);

  OracleHandle oracle(objective, body,
                      bandit ? OracleKind::value_stoch : OracleKind::grad_stoch,
                      consts.sigma, config.seed, /*stream=*/0);
  SphereSampler sampler(body.hull_basis, config.seed, /*stream=*/1);
  MomentumState momentum(body.dim_ambient, /*deterministic=*/false);
  const double eps_step = epsilon_for(config.variant, params.iterations);

  Eigen::VectorXd z = z_1;
  Eigen::VectorXd commit = z_1;
  long t = 0;
  const long per_iter = bandit ? 2L * params.batch : params.batch;
  const double scale_two_point = body.hull_dim / (2.0 * params.delta);

  Eigen::VectorXd g(body.dim_ambient), u(body.dim_ambient), probe(body.dim_ambient);
  Eigen::VectorXd grad_sample(body.dim_ambient);
  double f_at_z = objective.value(z);
  for (int n = 1; n <= params.iterations && t < explore_budget; ++n) {
    // A batch cut short by the budget still plays its queries, but the
    // iteration it belongs to is thrown away.
    const bool complete = explore_budget - t >= per_iter;
    g.setZero();
    if (bandit) {
      for (int i = 0; i < params.batch && t < explore_budget; ++i) {
        sampler.sample_into(u);
        probe = z + params.delta * u;
        const double up = oracle.value(probe);
        log.play(++t, probe, up, objective.value(probe));
        if (t >= explore_budget && !complete) break;
        probe = z - params.delta * u;
        const double down = oracle.value(probe);
        log.play(++t, probe, down, objective.value(probe));
        g += scale_two_point * (up - down) * u;
      }
      g /= params.batch;
    } else {
      for (int i = 0; i < params.batch && t < explore_budget; ++i) {
        oracle.gradient_into(z, grad_sample);
        log.play(++t, z, f_at_z, f_at_z);
        g += grad_sample;
      }
      g /= params.batch;
      if (body.hull_dim < body.dim_ambient)
        g = body.hull_basis * (body.hull_basis.transpose() * g);
    }
    if (!complete) break;
    momentum.update(g);
    const Eigen::VectorXd v =
        optimal_direction(config.variant, shrunken, momentum.g_bar, z, z_1);
    z = update_step(config.variant, z, v, eps_step);
    if (violation(body, z) > 1e-7)
      throw FeasibilityViolationError("iterate left the feasible set");
    commit = z;
    f_at_z = objective.value(z);
  }

  // Parameters that undershoot the budget leave a few exploration rounds with
  // nothing left to estimate; commit early for those so the exploration phase
  // is exactly T0 rounds.
  record.committed_point = commit;
  record.committed_value = objective.value(commit);
  while (t < explore_budget) {
    const double reward = bandit ? oracle.value(commit) : record.committed_value;
    log.play(++t, commit, reward, record.committed_value);
  }

  while (t < horizon) {
    const double reward = bandit ? oracle.value(commit) : record.committed_value;
    log.play(++t, commit, reward, record.committed_value);
  }
  return record;
}

}  // namespace drsubmax
