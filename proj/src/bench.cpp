#include "ssgman/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <limits>
#include <tuple>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ssgman/rng.hpp"

namespace ssgman {

ScenarioSpec ScenarioSpec::manipulation(ModelKind assumed, ModelKind actual) {
  ScenarioSpec s;
  s.attacker_assumed = assumed;
  s.defender_actual = actual;
  s.manipulative = true;
  s.label = model_name(assumed) + "vs" + model_name(actual);
  return s;
}

ScenarioSpec ScenarioSpec::non_manipulate() {
  ScenarioSpec s;
  s.manipulative = false;
  s.label = "nonManipulate";
  return s;
}

std::vector<ScenarioSpec> ScenarioSpec::full_matrix() {
  std::vector<ScenarioSpec> out;
  const ModelKind kinds[] = {ModelKind::QR, ModelKind::SUQR, ModelKind::SHARP};
  for (ModelKind assumed : kinds) {
    for (ModelKind actual : kinds) {
      out.push_back(manipulation(assumed, actual));
    }
  }
  out.push_back(non_manipulate());
  return out;
}

void ExperimentConfig::validate() const {
  if (target_counts.empty() || horizons.empty() || covariance_values.empty() ||
      scenarios.empty()) {
    throw std::invalid_argument("ExperimentConfig: empty dimension list");
  }
  for (double r : covariance_values) {
    if (r < -1.0 || r > 0.0) {
      throw std::invalid_argument("ExperimentConfig: covariance outside [-1,0]");
    }
  }
  if (games_per_r <= 0) throw std::invalid_argument("ExperimentConfig: games_per_r");
  if (resource_ratio <= 0.0 || resource_ratio > 1.0) {
    throw std::invalid_argument("ExperimentConfig: resource_ratio");
  }
  cfg.validate();
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int worker_count() {
  if (const char* env = std::getenv("SSGMAN_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct Job {
  int n_targets;
  int horizon;
  double covariance_r;
  std::uint64_t seed;
  ScenarioSpec scenario;
};

RunRecord execute(const Job& job, const ExperimentConfig& config) {
  RunRecord rec;
  rec.n_targets = job.n_targets;
  rec.horizon = job.horizon;
  rec.covariance_r = job.covariance_r;
  rec.seed = job.seed;
  rec.scenario = job.scenario.label;
  auto start = std::chrono::steady_clock::now();
  try {
    GameInstance game = generate_covariance_game(
        job.n_targets, job.covariance_r, job.seed, config.resource_ratio,
        config.max_attacks, job.horizon);
    if (job.scenario.manipulative) {
      PGDConfig cfg = config.cfg;
      cfg.seed = Rng::derive(config.cfg.seed, job.seed);
      PlanResult res = optimize_plan(game, job.scenario.attacker_assumed,
                                     job.scenario.defender_actual, cfg,
                                     cfg.n_outer_restarts,
                                     config.defender_solver);
      // Reported utilities come from the rounded plan, re-simulated.
      AttackPlan rounded = round_plan(res.plan, game.max_attacks_per_step);
      Trajectory traj = simulate_horizon(
          game, rounded, job.scenario.attacker_assumed,
          job.scenario.defender_actual, cfg, false, config.defender_solver);
      rec.att_util_per_step = traj.per_step_att_utility.mean();
      rec.def_util_per_step = traj.per_step_def_utility.mean();
      rec.converged = res.converged;
    } else {
      BaselineResult res = nonmanipulative_baseline(game, job.horizon);
      rec.att_util_per_step = res.att_per_step;
      rec.def_util_per_step = res.def_per_step;
      rec.converged = true;
    }
  } catch (const std::exception& e) {
    rec.error = true;
    rec.error_msg = e.what();
    rec.att_util_per_step = rec.def_util_per_step =
        std::numeric_limits<double>::quiet_NaN();
  }
  rec.runtime_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

struct Stats {
  int count = 0;
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    ++count;
    sum += v;
    sumsq += v * v;
  }
  double mean() const { return count > 0 ? sum / count : 0.0; }
  double stderr_() const {
    if (count < 2) return 0.0;
    double var = (sumsq - sum * sum / count) / (count - 1);
    return std::sqrt(std::max(0.0, var) / count);
  }
};

}  // namespace

std::vector<RunRecord> run_matrix(const ExperimentConfig& config) {
  config.validate();

  std::vector<Job> jobs;
  for (int n : config.target_counts) {
    for (int t : config.horizons) {
      for (double r : config.covariance_values) {
        for (int g = 0; g < config.games_per_r; ++g) {
          std::uint64_t seed =
              Rng::derive(config.base_seed, static_cast<std::uint64_t>(n),
                          static_cast<std::uint64_t>(g),
                          static_cast<std::uint64_t>(
                              std::llround((r + 2.0) * 1000.0)));
          for (const ScenarioSpec& sc : config.scenarios) {
            jobs.push_back({n, t, r, seed, sc});
          }
        }
      }
    }
  }

  std::vector<RunRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  const int workers =
      std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        records[i] = execute(jobs[i], config);
      }
    });
  }
  for (auto& th : pool) th.join();

  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    std::ofstream(config.output_dir + "/runs.csv") << runs_csv(records);
    std::ofstream(config.output_dir + "/aggregate.csv")
        << aggregate_csv(records);
  }
  return records;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "n_targets,horizon,covariance_r,seed,scenario,att_util_per_step,"
         "def_util_per_step,runtime_sec,converged\n";
  for (const RunRecord& r : records) {
    out << r.n_targets << ',' << r.horizon << ',' << fmt(r.covariance_r) << ','
        << r.seed << ',' << r.scenario << ',' << fmt(r.att_util_per_step)
        << ',' << fmt(r.def_util_per_step) << ',' << fmt(r.runtime_sec) << ','
        << (r.error ? "error" : (r.converged ? "1" : "0")) << '\n';
  }
  return out.str();
}

std::string aggregate_csv(const std::vector<RunRecord>& records) {
  // Keyed by (n_targets, horizon, scenario); insertion order of first
  // appearance keeps the output deterministic.
  std::map<std::tuple<int, int, std::string>, std::array<Stats, 3>> cells;
  std::vector<std::tuple<int, int, std::string>> order;
  for (const RunRecord& r : records) {
    if (r.error) continue;
    auto key = std::make_tuple(r.n_targets, r.horizon, r.scenario);
    if (cells.find(key) == cells.end()) order.push_back(key);
    auto& s = cells[key];
    s[0].add(r.att_util_per_step);
    s[1].add(r.def_util_per_step);
    s[2].add(r.runtime_sec);
  }
  std::ostringstream out;
  out << "n_targets,horizon,scenario,games,att_mean,att_stderr,def_mean,"
         "def_stderr,runtime_mean_sec\n";
  for (const auto& key : order) {
    const auto& s = cells[key];
    out << std::get<0>(key) << ',' << std::get<1>(key) << ','
        << std::get<2>(key) << ',' << s[0].count << ',' << fmt(s[0].mean())
        << ',' << fmt(s[0].stderr_()) << ',' << fmt(s[1].mean()) << ','
        << fmt(s[1].stderr_()) << ',' << fmt(s[2].mean()) << '\n';
  }
  return out.str();
}

void emit_plotdata(const std::vector<RunRecord>& records,
                   const std::string& output_dir) {
  std::filesystem::create_directories(output_dir);

  std::vector<int> horizons;
  for (const RunRecord& r : records) {
    if (std::find(horizons.begin(), horizons.end(), r.horizon) ==
        horizons.end()) {
      horizons.push_back(r.horizon);
    }
  }
  std::sort(horizons.begin(), horizons.end());

  for (int metric = 0; metric < 2; ++metric) {
    for (int t : horizons) {
      std::map<std::pair<int, std::string>, Stats> cells;
      std::vector<std::pair<int, std::string>> order;
      for (const RunRecord& r : records) {
        if (r.error || r.horizon != t) continue;
        auto key = std::make_pair(r.n_targets, r.scenario);
        if (cells.find(key) == cells.end()) order.push_back(key);
        cells[key].add(metric == 0 ? r.att_util_per_step
                                   : r.def_util_per_step);
      }
      std::ostringstream out;
      out << "n_targets,scenario,mean,stderr\n";
      for (const auto& key : order) {
        const Stats& s = cells.at(key);
        out << key.first << ',' << key.second << ',' << fmt(s.mean()) << ','
            << fmt(s.stderr_()) << '\n';
      }
      std::string name = std::string(metric == 0 ? "fig_att_util" : "fig_def_util") +
                         "_T" + std::to_string(t) + ".csv";
      std::ofstream(output_dir + "/" + name) << out.str();
    }
  }

  std::map<std::pair<int, int>, Stats> runtime_cells;
  std::vector<std::pair<int, int>> runtime_order;
  for (const RunRecord& r : records) {
    if (r.error) continue;
    auto key = std::make_pair(r.n_targets, r.horizon);
    if (runtime_cells.find(key) == runtime_cells.end()) {
      runtime_order.push_back(key);
    }
    runtime_cells[key].add(r.runtime_sec / 60.0);
  }
  std::ostringstream out;
  out << "n_targets,T,mean_minutes\n";
  for (const auto& key : runtime_order) {
    out << key.first << ',' << key.second << ','
        << fmt(runtime_cells.at(key).mean()) << '\n';
  }
  std::ofstream(output_dir + "/fig_runtime.csv") << out.str();
}

void from_json(const nlohmann::json& j, ExperimentConfig& config) {
  config.target_counts = j.value("target_counts", config.target_counts);
  config.horizons = j.value("horizons", config.horizons);
  config.covariance_values =
      j.value("covariance_values", config.covariance_values);
  config.games_per_r = j.value("games_per_r", config.games_per_r);
  config.max_attacks = j.value("max_attacks", config.max_attacks);
  config.resource_ratio = j.value("resource_ratio", config.resource_ratio);
  config.base_seed = j.value("base_seed", config.base_seed);
  config.output_dir = j.value("output_dir", config.output_dir);
  if (j.contains("defender_solver")) {
    std::string s = j.at("defender_solver").get<std::string>();
    if (s == "pgd") {
      config.defender_solver = PatrolSolver::PGD;
    } else if (s == "interior") {
      config.defender_solver = PatrolSolver::InteriorAlt;
    } else {
      throw std::invalid_argument("defender_solver must be pgd or interior");
    }
  }
  if (j.contains("scenarios")) {
    config.scenarios.clear();
    for (const auto& item : j.at("scenarios")) {
      std::string label = item.get<std::string>();
      if (label == "nonManipulate") {
        config.scenarios.push_back(ScenarioSpec::non_manipulate());
        continue;
      }
      auto pos = label.find("vs");
      if (pos == std::string::npos) {
        throw std::invalid_argument("bad scenario label: " + label);
      }
      config.scenarios.push_back(
          ScenarioSpec::manipulation(model_from_name(label.substr(0, pos)),
                                     model_from_name(label.substr(pos + 2))));
    }
  }
  if (j.contains("pgd")) {
    const auto& p = j.at("pgd");
    config.cfg.patrol_alpha = p.value("patrol_alpha", config.cfg.patrol_alpha);
    config.cfg.learn_alpha = p.value("learn_alpha", config.cfg.learn_alpha);
    config.cfg.outer_alpha = p.value("outer_alpha", config.cfg.outer_alpha);
    config.cfg.n_rounds = p.value("n_rounds", config.cfg.n_rounds);
    config.cfg.max_iters = p.value("max_iters", config.cfg.max_iters);
    config.cfg.outer_max_iters =
        p.value("outer_max_iters", config.cfg.outer_max_iters);
    config.cfg.n_outer_restarts =
        p.value("n_outer_restarts", config.cfg.n_outer_restarts);
    config.cfg.utility_tol = p.value("utility_tol", config.cfg.utility_tol);
    config.cfg.loss_tol = p.value("loss_tol", config.cfg.loss_tol);
    config.cfg.seed = p.value("seed", config.cfg.seed);
    config.cfg.warm_start = p.value("warm_start", config.cfg.warm_start);
  }
  config.validate();
}

}  // namespace ssgman
