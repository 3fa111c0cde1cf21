#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "drsubmax/etc.hpp"
#include "drsubmax/frank_wolfe.hpp"
#include "drsubmax/geometry.hpp"
#include "drsubmax/objective.hpp"

namespace drsubmax {

enum class RunMode { offline, online, sweep, baseline };

/// Everything a run needs, loaded from TOML (primary) or JSON.  TOML support
/// is a small built-in reader covering tables, scalars and nested arrays,
/// which is all the sweep files use; JSON is parsed by the vendored library.
/// Both formats share one schema.
struct ExperimentConfig {
  RunMode mode = RunMode::offline;

  // [body]
  int dim = 0;
  Eigen::MatrixXd ineq_coeffs;  // extra rows beyond the unit cube
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq_coeffs;
  Eigen::VectorXd eq_rhs;
  BodyFlags flags;

  // [objective]
  std::string objective_kind;  // "dr_quadratic" | "coverage"
  Eigen::MatrixXd quad;
  Eigen::VectorXd lin;
  double constant = 0.0;
  std::vector<std::vector<int>> cover_sets;
  Eigen::VectorXd cover_weights;

  // [oracle]
  double sigma0 = 0.0;
  double sigma1 = 0.0;

  // [run]
  FwVariant variant = FwVariant::A_monotone_origin;
  OracleCase oracle_case = OracleCase::det_grad;
  int iterations = 100;
  int batch = 1;
  double delta = 0.0;
  bool has_eps_target = false;
  double eps_target = 0.0;
  std::vector<std::uint64_t> seeds = {0};
  long horizon = 0;
  Feedback feedback = Feedback::bandit;
  std::vector<long> sweep_grid;     // N values (offline sweep) or T values (online)
  std::string sweep_over = "N";     // "N" | "T"
  int baseline_resolution = 201;
  double lemma_c = 1.0;
  std::string out_path;
};

/// Parses by extension (.toml / .json), falling back to content sniffing.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// The TOML-subset reader, exposed for tests.  Produces the same document
/// shape the JSON path consumes.
nlohmann::json toml_to_json(const std::string& text);

/// Body construction from the shared schema:
/// {"d": int, "A": [[...]], "b": [...], "E": [[...]], "f": [...],
///  "flags": {"down_closed": bool}}.  Unit-cube rows are appended by the
/// builder.
ConvexBody body_from_json(const nlohmann::json& doc, double tol = 1e-9);

ConvexBody build_config_body(const ExperimentConfig& config);
Objective build_config_objective(const ExperimentConfig& config);

}  // namespace drsubmax
