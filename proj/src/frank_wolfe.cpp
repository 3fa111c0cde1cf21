#include "drsubmax/frank_wolfe.hpp"

#include <cmath>
#include <stdexcept>

#include "drsubmax/errors.hpp"

namespace drsubmax {

namespace {

constexpr double kFeasTol = 1e-7;

bool value_case(OracleCase c) {
  return c == OracleCase::det_value || c == OracleCase::stoch_value;
}

OracleKind oracle_kind_for(OracleCase c) {
  switch (c) {
    case OracleCase::det_grad: return OracleKind::grad_det;
    case OracleCase::stoch_grad: return OracleKind::grad_stoch;
    case OracleCase::det_value: return OracleKind::value_det;
    case OracleCase::stoch_value: return OracleKind::value_stoch;
  }
  throw std::logic_error("bad oracle case");
}

}  // namespace

double epsilon_for(FwVariant variant, int iterations) {
  if (iterations < 4) throw std::invalid_argument("need at least 4 iterations");
  const double n = iterations;
  switch (variant) {
    case FwVariant::A_monotone_origin:
    case FwVariant::B_nonmonotone_down_closed:
      return 1.0 / n;
    case FwVariant::C_monotone_general:
      return std::log(n) / (2.0 * n);
    case FwVariant::D_nonmonotone_general:
      return std::log(2.0) / n;
  }
  throw std::logic_error("bad variant");
}

Eigen::VectorXd optimal_direction(FwVariant variant, const ShrunkenBody& body,
                                  const Eigen::VectorXd& g_bar,
                                  const Eigen::VectorXd& z_n,
                                  const Eigen::VectorXd& z_1) {
  LmoQuery query;
  query.direction = g_bar;
  switch (variant) {
    case FwVariant::A_monotone_origin:
      query.base_shift = z_1;
      break;
    case FwVariant::B_nonmonotone_down_closed:
      query.base_shift = z_1;
      query.upper_cap = Eigen::VectorXd::Ones(z_n.size()) - z_n;
      break;
    case FwVariant::C_monotone_general:
    case FwVariant::D_nonmonotone_general:
      query.base_shift = Eigen::VectorXd::Zero(z_n.size());
      break;
  }
  return lmo(body, query);
}

Eigen::VectorXd update_step(FwVariant variant, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& v, double eps) {
  switch (variant) {
    case FwVariant::A_monotone_origin:
    case FwVariant::B_nonmonotone_down_closed:
      return z + eps * v;
    case FwVariant::C_monotone_general:
    case FwVariant::D_nonmonotone_general:
      return (1.0 - eps) * z + eps * v;
  }
  throw std::logic_error("bad variant");
}

double approx_ratio(FwVariant variant, double start_inf_norm) {
  switch (variant) {
    case FwVariant::A_monotone_origin: return 1.0 - std::exp(-1.0);
    case FwVariant::B_nonmonotone_down_closed: return std::exp(-1.0);
    case FwVariant::C_monotone_general: return 0.5;
    case FwVariant::D_nonmonotone_general: return 0.25 * (1.0 - start_inf_norm);
  }
  throw std::logic_error("bad variant");
}

double momentum_quality(OracleCase oracle_case, const BoundConstants& c,
                        int batch, double delta) {
  if (oracle_case == OracleCase::det_grad) return 0.0;
  const double g2 = c.lipschitz * c.lipschitz;
  const double floor = std::pow(4.0, 2.0 / 3.0) * g2;
  const double smooth_part =
      6.0 * c.smoothness * c.smoothness * c.diameter * c.diameter;
  double noise_sq = 0.0;
  if (oracle_case == OracleCase::stoch_grad) {
    noise_sq = 4.0 * c.sigma * c.sigma;
  } else {
    // Two-point estimator: second moment at most C d G^2 plus the value-noise
    // inflation 2 d^2 sigma0^2 / delta^2.
    noise_sq = 4.0 * c.lemma_c * c.dim * g2;
    if (oracle_case == OracleCase::stoch_value)
      noise_sq += 2.0 * c.dim * c.dim * c.sigma * c.sigma / (delta * delta);
  }
  return std::max(floor, smooth_part + noise_sq / batch);
}

namespace {

double delta_penalty_factor(FwVariant variant, const BoundConstants& c) {
  const double base =
      (variant == FwVariant::A_monotone_origin ||
       variant == FwVariant::B_nonmonotone_down_closed)
          ? (std::sqrt(static_cast<double>(c.dim)) + c.diameter) / c.inradius
          : c.diameter / c.inradius;
  return c.lipschitz * (2.0 + base);
}

// The two N-dependent terms of the bound.
double drift_term(FwVariant variant, const BoundConstants& c, double q,
                  double n) {
  const double lead = 3.0 * c.diameter * std::sqrt(q);
  if (variant == FwVariant::C_monotone_general)
    return lead * std::log(n) / (2.0 * std::cbrt(n));
  return lead / std::cbrt(n);
}

double curvature_term(FwVariant variant, const BoundConstants& c, double n) {
  const double dg = c.diameter * c.lipschitz;
  const double ld2 = c.smoothness * c.diameter * c.diameter;
  switch (variant) {
    case FwVariant::A_monotone_origin:
    case FwVariant::B_nonmonotone_down_closed:
      return ld2 / (2.0 * n);
    case FwVariant::C_monotone_general: {
      const double logn = std::log(n);
      return (4.0 * dg + ld2 * logn * logn) / (8.0 * n);
    }
    case FwVariant::D_nonmonotone_general:
      return (dg + 2.0 * ld2) / (4.0 * n);
  }
  throw std::logic_error("bad variant");
}

}  // namespace

double error_bound(FwVariant variant, OracleCase oracle_case,
                   const BoundConstants& c, int iterations, int batch,
                   double delta) {
  const double q = momentum_quality(oracle_case, c, batch, delta);
  const double n = iterations;
  return drift_term(variant, c, q, n) + curvature_term(variant, c, n) +
         delta * delta_penalty_factor(variant, c);
}

FwParams params_for_target(OracleCase oracle_case, FwVariant variant,
                           double eps_target, const BoundConstants& c,
                           double delta_cap) {
  if (!(eps_target > 0)) throw std::invalid_argument("target must be positive");
  const bool value_oracle = value_case(oracle_case);
  const int active_terms =
      oracle_case == OracleCase::det_grad ? 1 : (value_oracle ? 3 : 2);
  const double budget = eps_target / active_terms;

  FwParams params;
  if (value_oracle) {
    params.delta = eps_target / (active_terms * delta_penalty_factor(variant, c));
    if (delta_cap > 0.0) params.delta = std::min(params.delta, delta_cap);
    if (params.delta >= c.inradius)
      throw TargetTooTightError("sampling radius would reach the inradius");
  }

  const double g2 = c.lipschitz * c.lipschitz;
  if (oracle_case == OracleCase::stoch_value) {
    // Pick B so the estimator part of the momentum constant is at most G^2,
    // which pins Q to a parameter-free value.
    double noise = 4.0 * c.lemma_c * c.dim * g2 +
                   2.0 * c.dim * c.dim * c.sigma * c.sigma /
                       (params.delta * params.delta);
    params.batch = static_cast<int>(std::ceil(noise / std::max(g2, 1e-300)));
    params.batch = std::max(params.batch, 1);
  }

  const double q = momentum_quality(oracle_case, c, params.batch, params.delta);
  constexpr int kMaxIterations = 1 << 30;
  auto fits = [&](int n) {
    return drift_term(variant, c, q, n) <= budget &&
           curvature_term(variant, c, n) <= budget;
  };
  int n = 4;
  // The log-bearing terms are not monotone for tiny N; scan those directly.
  while (n <= 64 && !fits(n)) ++n;
  if (n > 64) {
    int lo = 64, hi = 128;
    while (!fits(hi)) {
      lo = hi;
      if (hi >= kMaxIterations)
        throw TargetTooTightError("target needs more than 2^30 iterations");
      hi *= 2;
    }
    while (lo + 1 < hi) {
      const int mid = lo + (hi - lo) / 2;
      (fits(mid) ? hi : lo) = mid;
    }
    n = hi;
  }
  params.iterations = n;

  while (error_bound(variant, oracle_case, c, params.iterations, params.batch,
                     params.delta) > eps_target &&
         params.iterations < kMaxIterations) {
    params.iterations *= 2;
  }
  return params;
}

Trajectory run_offline(const FwConfig& config, const ConvexBody& body,
                       const Objective& objective) {
  if (config.iterations < 4)
    throw std::invalid_argument("need at least 4 iterations");
  if (config.batch < 1) throw std::invalid_argument("batch size must be >= 1");
  const bool needs_radius = value_case(config.oracle_case);
  if (needs_radius && !(config.delta > 0))
    throw std::invalid_argument("value oracles need a positive sampling radius");
  if (!needs_radius && config.delta != 0.0)
    throw std::invalid_argument("gradient oracles run with zero sampling radius");

  switch (config.variant) {
    case FwVariant::A_monotone_origin:
      if (!body.contains_origin)
        throw VariantBodyMismatchError("variant A needs the origin in the body");
      break;
    case FwVariant::B_nonmonotone_down_closed:
      if (!body.down_closed || !body.contains_origin)
        throw VariantBodyMismatchError(
            "variant B needs a down-closed body containing the origin");
      break;
    default:
      break;
  }

  const ShrunkenBody shrunken = shrink(body, config.delta);
  const Eigen::VectorXd z_1 = min_inf_norm_point(shrunken);
  const double eps = epsilon_for(config.variant, config.iterations);

  double sigma = 0.0;
  if (config.oracle_case == OracleCase::stoch_grad) sigma = config.sigma1;
  if (config.oracle_case == OracleCase::stoch_value) sigma = config.sigma0;
  OracleHandle oracle(objective, body, oracle_kind_for(config.oracle_case),
                      sigma, config.seed, /*stream=*/0);
  SphereSampler sampler(body.hull_basis, config.seed, /*stream=*/1);
  MomentumState momentum(body.dim_ambient,
                         config.oracle_case == OracleCase::det_grad);

  Trajectory traj;
  traj.start_point = z_1;
  if (config.record_iterates) traj.iterates.reserve(config.iterations + 1);

  const bool full_dim = body.hull_dim == body.dim_ambient;
  Eigen::VectorXd z = z_1;
  traj.max_violation = violation(body, z);
  if (traj.max_violation > kFeasTol)
    throw FeasibilityViolationError("start point outside the feasible set");
  Eigen::VectorXd exact_grad(body.dim_ambient);
  for (int n = 1; n <= config.iterations; ++n) {
    Eigen::VectorXd g =
        needs_radius
            ? two_point_gradient(oracle, z, config.delta, sampler, config.batch)
            : gradient_batch(oracle, z, config.batch, body.hull_basis);
    momentum.update(g);

    const Eigen::VectorXd v = optimal_direction(config.variant, shrunken,
                                                momentum.g_bar, z, z_1);

    if (config.record_iterates) {
      FwIterate it;
      it.n = n;
      it.z = z;
      it.v = v;
      it.g_bar_norm = momentum.g_bar.norm();
      it.f_exact = objective.value(z);
      objective.gradient_into(z, exact_grad);
      if (!full_dim)
        exact_grad = body.hull_basis * (body.hull_basis.transpose() * exact_grad);
      it.grad_err_sq = (exact_grad - momentum.g_bar).squaredNorm();
      it.queries = oracle.query_count();
      traj.iterates.push_back(std::move(it));
    }

    z = update_step(config.variant, z, v, eps);
    const double viol = violation(body, z);
    traj.max_violation = std::max(traj.max_violation, viol);
    if (viol > kFeasTol)
      throw FeasibilityViolationError("iterate left the feasible set");
  }

  traj.final_point = z;
  traj.final_value = objective.value(z);
  traj.total_queries = oracle.query_count();
  if (config.record_iterates) {
    FwIterate it;
    it.n = config.iterations + 1;
    it.z = z;
    it.v = Eigen::VectorXd::Zero(body.dim_ambient);
    it.g_bar_norm = momentum.g_bar.norm();
    it.f_exact = traj.final_value;
    it.queries = traj.total_queries;
    traj.iterates.push_back(std::move(it));
  }
  return traj;
}

}  // namespace drsubmax
