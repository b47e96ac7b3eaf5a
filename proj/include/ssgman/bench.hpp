#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssgman/planner.hpp"

namespace ssgman {

/// One cell of the model-mismatch matrix: attacker-assumed vs
/// defender-actual model, labelled "<assumed>vs<actual>"; plus the
/// nonManipulate baseline.
struct ScenarioSpec {
  ModelKind attacker_assumed = ModelKind::QR;
  ModelKind defender_actual = ModelKind::QR;
  bool manipulative = true;
  std::string label;

  static ScenarioSpec manipulation(ModelKind assumed, ModelKind actual);
  static ScenarioSpec non_manipulate();
  /// The nine model pairs followed by nonManipulate.
  static std::vector<ScenarioSpec> full_matrix();
};

struct ExperimentConfig {
  std::vector<int> target_counts{4, 8, 12};
  std::vector<int> horizons{2, 4};
  std::vector<double> covariance_values{-1.0, -0.8, -0.6, -0.4, -0.2, 0.0};
  int games_per_r = 3;
  int max_attacks = 50;
  double resource_ratio = 0.5;
  std::uint64_t base_seed = 1;
  PGDConfig cfg;
  std::string output_dir = ".";
  PatrolSolver defender_solver = PatrolSolver::PGD;
  std::vector<ScenarioSpec> scenarios = ScenarioSpec::full_matrix();

  void validate() const;
};

struct RunRecord {
  int n_targets = 0;
  int horizon = 0;
  double covariance_r = 0.0;
  std::uint64_t seed = 0;
  std::string scenario;
  double att_util_per_step = 0.0;
  double def_util_per_step = 0.0;
  double runtime_sec = 0.0;
  bool converged = false;
  bool error = false;
  std::string error_msg;
};

/// Runs the full (N, T, r, game, scenario) matrix on a bounded worker pool
/// (SSGMAN_WORKERS env var); results come back in config-enumeration order.
/// Writes runs.csv and aggregate.csv into output_dir.
std::vector<RunRecord> run_matrix(const ExperimentConfig& config);

/// Per-figure CSVs: attacker/defender utility vs target count per scenario
/// (one file per horizon) and the runtime panel.
void emit_plotdata(const std::vector<RunRecord>& records,
                   const std::string& output_dir);

std::string runs_csv(const std::vector<RunRecord>& records);
std::string aggregate_csv(const std::vector<RunRecord>& records);

void from_json(const nlohmann::json& j, ExperimentConfig& config);

}  // namespace ssgman
