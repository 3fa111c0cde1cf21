#include "drsubmax/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "drsubmax/errors.hpp"
#include "drsubmax/grid_search.hpp"

namespace drsubmax {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string join_point(const Eigen::VectorXd& z) {
  std::string out;
  for (int i = 0; i < z.size(); ++i) {
    if (i) out.push_back(';');
    out += fmt17(z(i));
  }
  return out;
}

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr ms;
  if (xs.empty()) return ms;
  double sum = 0.0;
  for (double x : xs) sum += x;
  ms.mean = sum / xs.size();
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - ms.mean) * (x - ms.mean);
    ms.std_error = std::sqrt(sq / (xs.size() - 1) / xs.size());
  }
  return ms;
}

BoundConstants constants_for(const Objective& objective, const ConvexBody& body,
                             OracleCase oracle_case, const ExperimentConfig& cfg) {
  BoundConstants c;
  c.lipschitz = objective.lipschitz;
  c.smoothness = objective.smoothness;
  c.diameter = body.diameter_bound;
  c.dim = body.dim_ambient;
  c.inradius = body.inradius;
  c.sigma = oracle_case == OracleCase::stoch_grad
                ? cfg.sigma1
                : (oracle_case == OracleCase::stoch_value ? cfg.sigma0 : 0.0);
  c.lemma_c = cfg.lemma_c;
  return c;
}

FwConfig fw_config_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  FwConfig fw;
  fw.variant = cfg.variant;
  fw.oracle_case = cfg.oracle_case;
  fw.iterations = cfg.iterations;
  fw.batch = cfg.batch;
  fw.delta = cfg.delta;
  fw.sigma0 = cfg.sigma0;
  fw.sigma1 = cfg.sigma1;
  fw.seed = seed;
  return fw;
}

// Least squares slope of log(y) against log(x) over the cells where y > 0.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > 0 && xs[i] > 0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= lx.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

void run_pool(int jobs, int task_count, const std::function<void(int)>& task) {
  if (jobs <= 1 || task_count <= 1) {
    for (int i = 0; i < task_count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  const int n_workers = std::min(jobs, task_count);
  workers.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (int i = next.fetch_add(1); i < task_count; i = next.fetch_add(1))
        task(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

void cmd_offline(const ExperimentConfig& cfg, std::ostream& out) {
  const ConvexBody body = build_config_body(cfg);
  const Objective objective = build_config_objective(cfg);
  const GridResult baseline = grid_maximize(objective, body, cfg.baseline_resolution);

  ExperimentConfig run_cfg = cfg;
  if (cfg.has_eps_target) {
    const BoundConstants c = constants_for(objective, body, cfg.oracle_case, cfg);
    const FwParams p =
        params_for_target(cfg.oracle_case, cfg.variant, cfg.eps_target, c);
    run_cfg.iterations = p.iterations;
    run_cfg.batch = p.batch;
    run_cfg.delta = p.delta;
  }

  out << "seed,n,query_count,F_exact,grad_err_sq\n";
  std::vector<double> finals;
  double start_inf_norm = 0.0;
  for (std::uint64_t seed : cfg.seeds) {
    const Trajectory traj = run_offline(fw_config_for(run_cfg, seed), body, objective);
    for (const FwIterate& it : traj.iterates) {
      out << seed << ',' << it.n << ',' << it.queries << ',' << fmt17(it.f_exact)
          << ',' << fmt17(it.grad_err_sq) << '\n';
    }
    finals.push_back(traj.final_value);
    start_inf_norm = traj.start_point.size() > 0
                         ? traj.start_point.cwiseAbs().maxCoeff()
                         : 0.0;
  }

  const MeanStderr ms = mean_stderr(finals);
  const BoundConstants c = constants_for(objective, body, run_cfg.oracle_case, cfg);
  const double err = error_bound(run_cfg.variant, run_cfg.oracle_case, c,
                                 run_cfg.iterations, run_cfg.batch, run_cfg.delta);
  const double alpha = approx_ratio(run_cfg.variant, start_inf_norm);
  const double rhs = alpha * baseline.value - err - baseline.gap_bound;
  out << "# summary mean_F_final=" << fmt17(ms.mean)
      << " stderr=" << fmt17(ms.std_error) << " alpha=" << fmt17(alpha)
      << " f_star_grid=" << fmt17(baseline.value)
      << " gap_bound=" << fmt17(baseline.gap_bound)
      << " bound_rhs=" << fmt17(rhs) << " N=" << run_cfg.iterations
      << " B=" << run_cfg.batch << " delta=" << fmt17(run_cfg.delta)
      << " pass=" << (ms.mean >= rhs ? 1 : 0) << '\n';
}

void cmd_online(const ExperimentConfig& cfg, std::ostream& out) {
  const ConvexBody body = build_config_body(cfg);
  const Objective objective = build_config_objective(cfg);
  const GridResult baseline = grid_maximize(objective, body, cfg.baseline_resolution);

  out << "seed,t,z,F_exact,reward\n";
  std::vector<double> alpha_regrets, one_regrets;
  double alpha = 0.0;
  long explore = 0;
  for (std::uint64_t seed : cfg.seeds) {
    EtcConfig etc;
    etc.horizon = cfg.horizon;
    etc.feedback = cfg.feedback;
    etc.variant = cfg.variant;
    etc.sigma0 = cfg.sigma0;
    etc.sigma1 = cfg.sigma1;
    etc.seed = seed;
    etc.lemma_c = cfg.lemma_c;
    const RegretRecord rec = run_etc(etc, body, objective);
    for (const EtcRound& r : rec.rounds) {
      out << seed << ',' << r.t << ',' << join_point(r.action) << ','
          << fmt17(r.f_exact) << ',' << fmt17(r.reward) << '\n';
    }
    alpha = rec.alpha;
    explore = rec.explore_rounds;
    alpha_regrets.push_back(regret(rec, baseline.value, rec.alpha));
    one_regrets.push_back(regret(rec, baseline.value, 1.0));
  }
  const MeanStderr ra = mean_stderr(alpha_regrets);
  const MeanStderr r1 = mean_stderr(one_regrets);
  const double rate = cfg.feedback == Feedback::bandit ? 5.0 / 6.0 : 3.0 / 4.0;
  const double scale = std::pow(static_cast<double>(cfg.horizon), rate);
  out << "# summary T=" << cfg.horizon << " T0=" << explore
      << " alpha=" << fmt17(alpha) << " f_star_grid=" << fmt17(baseline.value)
      << " mean_alpha_regret=" << fmt17(ra.mean)
      << " stderr_alpha_regret=" << fmt17(ra.std_error)
      << " mean_regret_vs_best=" << fmt17(r1.mean)
      << " stderr_regret_vs_best=" << fmt17(r1.std_error)
      << " regret_over_T_rate=" << fmt17(ra.mean / scale)
      << " regret_vs_best_over_T_rate=" << fmt17(r1.mean / scale) << '\n';
}

void cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, int jobs) {
  const ConvexBody body = build_config_body(cfg);
  const Objective objective = build_config_objective(cfg);
  const GridResult baseline = grid_maximize(objective, body, cfg.baseline_resolution);

  const int cells = static_cast<int>(cfg.sweep_grid.size());
  const int per_cell = static_cast<int>(cfg.seeds.size());
  const bool over_horizon = cfg.sweep_over == "T";

  // value metric: final F (offline) or alpha-regret (online);
  // gap metric: F* - final F (offline) or regret against the unscaled best.
  std::vector<double> values(cells * per_cell), gaps(cells * per_cell);
  run_pool(jobs, cells * per_cell, [&](int task) {
    const int cell = task / per_cell;
    const int seed_idx = task % per_cell;
    const std::uint64_t seed = cfg.seeds[seed_idx];
    if (over_horizon) {
      EtcConfig etc;
      etc.horizon = cfg.sweep_grid[cell];
      etc.feedback = cfg.feedback;
      etc.variant = cfg.variant;
      etc.sigma0 = cfg.sigma0;
      etc.sigma1 = cfg.sigma1;
      etc.seed = seed;
      etc.lemma_c = cfg.lemma_c;
      etc.record_rounds = false;
      const RegretRecord rec = run_etc(etc, body, objective);
      values[task] = regret(rec, baseline.value, rec.alpha);
      gaps[task] = regret(rec, baseline.value, 1.0);
    } else {
      ExperimentConfig run_cfg = cfg;
      run_cfg.iterations = static_cast<int>(cfg.sweep_grid[cell]);
      FwConfig fw = fw_config_for(run_cfg, seed);
      fw.record_iterates = false;
      const Trajectory traj = run_offline(fw, body, objective);
      values[task] = traj.final_value;
      gaps[task] = baseline.value - traj.final_value;
    }
  });

  std::vector<double> cell_params, cell_gap_means;
  out << "param,value,n_seeds,mean_value,stderr_value,mean_gap,stderr_gap\n";
  std::ostringstream rows;
  for (int cell = 0; cell < cells; ++cell) {
    std::vector<double> vs(values.begin() + cell * per_cell,
                           values.begin() + (cell + 1) * per_cell);
    std::vector<double> gs(gaps.begin() + cell * per_cell,
                           gaps.begin() + (cell + 1) * per_cell);
    const MeanStderr vm = mean_stderr(vs);
    const MeanStderr gm = mean_stderr(gs);
    rows << (over_horizon ? "T" : "N") << ',' << cfg.sweep_grid[cell] << ','
         << per_cell << ',' << fmt17(vm.mean) << ',' << fmt17(vm.std_error) << ','
         << fmt17(gm.mean) << ',' << fmt17(gm.std_error) << '\n';
    cell_params.push_back(static_cast<double>(cfg.sweep_grid[cell]));
    cell_gap_means.push_back(gm.mean);
  }
  out << rows.str();
  out << "# slope_loglog_gap=" << fmt17(loglog_slope(cell_params, cell_gap_means))
      << " f_star_grid=" << fmt17(baseline.value) << '\n';
}

void cmd_baseline(const ExperimentConfig& cfg, std::ostream& out) {
  const ConvexBody body = build_config_body(cfg);
  const Objective objective = build_config_objective(cfg);
  const GridResult r = grid_maximize(objective, body, cfg.baseline_resolution);
  out << "z_star,F_star,gap_bound\n";
  out << join_point(r.maximizer) << ',' << fmt17(r.value) << ','
      << fmt17(r.gap_bound) << '\n';
}

int run_command(const std::string& subcommand, const std::string& config_path,
                const std::string& out_path, const std::string& seeds_override,
                int jobs, std::ostream& err) {
  try {
    ExperimentConfig cfg = load_config(config_path);

    RunMode want;
    if (subcommand == "offline") want = RunMode::offline;
    else if (subcommand == "online") want = RunMode::online;
    else if (subcommand == "sweep") want = RunMode::sweep;
    else if (subcommand == "baseline") want = RunMode::baseline;
    else throw ConfigError("unknown subcommand '" + subcommand + "'");
    if (cfg.mode != want)
      throw ConfigError("config field 'run.mode' does not match subcommand '" +
                        subcommand + "'");

    if (!seeds_override.empty()) {
      cfg.seeds.clear();
      std::stringstream ss(seeds_override);
      std::string part;
      while (std::getline(ss, part, ',')) {
        try {
          cfg.seeds.push_back(std::stoull(part));
        } catch (const std::exception&) {
          throw ConfigError("bad --seeds entry '" + part + "'");
        }
      }
      if (cfg.seeds.empty()) throw ConfigError("--seeds list is empty");
    }

    if (jobs <= 0) {
      if (const char* env = std::getenv("DRSUBMAX_JOBS")) jobs = std::atoi(env);
      if (jobs <= 0) jobs = 1;
    }

    const std::string resolved_out = !out_path.empty() ? out_path : cfg.out_path;
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!resolved_out.empty() && resolved_out != "-") {
      file.open(resolved_out);
      if (!file) throw ConfigError("cannot open output file: " + resolved_out);
      out = &file;
    }

    switch (want) {
      case RunMode::offline: cmd_offline(cfg, *out); break;
      case RunMode::online: cmd_online(cfg, *out); break;
      case RunMode::sweep: cmd_sweep(cfg, *out, jobs); break;
      case RunMode::baseline: cmd_baseline(cfg, *out); break;
    }
    out->flush();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace drsubmax
