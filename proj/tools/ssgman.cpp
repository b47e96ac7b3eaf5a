#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ssgman/bench.hpp"
#include "ssgman/fdcheck.hpp"
#include "ssgman/rng.hpp"

namespace {

using namespace ssgman;

PatrolSolver parse_solver(const std::string& s) {
  if (s == "pgd") return PatrolSolver::PGD;
  if (s == "interior") return PatrolSolver::InteriorAlt;
  throw CLI::ValidationError("--solver must be pgd or interior");
}

int cmd_run(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config: " << config_path << "\n";
    return 2;
  }
  nlohmann::json j;
  in >> j;
  ExperimentConfig config = j.get<ExperimentConfig>();
  std::vector<RunRecord> records = run_matrix(config);
  emit_plotdata(records, config.output_dir);
  int errors = 0;
  for (const RunRecord& r : records) {
    if (r.error) {
      ++errors;
      std::cerr << "run error: N=" << r.n_targets << " T=" << r.horizon
                << " r=" << r.covariance_r << " seed=" << r.seed << " "
                << r.scenario << ": " << r.error_msg << "\n";
    }
  }
  std::cout << records.size() << " runs, " << errors << " errors; output in "
            << config.output_dir << "\n";
  return errors == 0 ? 0 : 1;
}

int cmd_baseline(const std::string& game_path, int horizon) {
  GameInstance game = load_game(game_path);
  int t = horizon > 0 ? horizon : game.horizon;
  BaselineResult res = nonmanipulative_baseline(game, t);
  nlohmann::json out{
      {"sse_target", res.traj.sse_target},
      {"att_util_per_step", res.att_per_step},
      {"def_util_per_step", res.def_per_step},
      {"sse_strategy",
       std::vector<double>(res.traj.strategies[0].data(),
                           res.traj.strategies[0].data() +
                               res.traj.strategies[0].size())}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_gradcheck(const std::string& game_path, double eps,
                  const std::string& attacker, const std::string& defender,
                  int horizon, std::uint64_t seed) {
  GameInstance game = load_game(game_path);
  if (horizon > 0) game.horizon = horizon;
  ModelKind att = model_from_name(attacker);
  ModelKind def = model_from_name(defender);

  PGDConfig cfg;
  cfg.seed = seed;
  cfg.n_rounds = 1;

  // Random feasible plan away from the simplex boundary so central
  // differences stay feasible.
  Rng rng(Rng::derive(seed, 0x9cu));
  AttackPlan plan;
  plan.z.resize(game.horizon, game.n_targets);
  for (int t = 0; t < game.horizon; ++t) {
    for (int n = 0; n < game.n_targets; ++n) {
      plan.z(t, n) = rng.uniform(1.0, 0.8 * game.max_attacks_per_step /
                                          game.n_targets);
    }
  }

  Trajectory traj = simulate_horizon(game, plan, att, def, cfg, true);
  Eigen::MatrixXd analytic = total_gradient(traj, game, plan);
  Eigen::MatrixXd numeric = fd_plan_gradient(game, plan, att, def, cfg, eps);
  double err = max_rel_error(analytic, numeric);
  std::printf("dF/dz check: T=%d N=%d eps=%g max_rel_err=%.3e%s\n",
              game.horizon, game.n_targets, eps, err,
              traj.degenerate ? " (degenerate projection encountered)" : "");
  std::cout << "analytic:\n" << analytic << "\nfinite-difference:\n"
            << numeric << "\n";
  return err <= 1e-3 ? 0 : 1;
}

int cmd_plan(const std::string& game_path, const std::string& attacker,
             const std::string& defender, const std::string& solver,
             const std::string& out_path, std::uint64_t seed) {
  GameInstance game = load_game(game_path);
  ModelKind att = model_from_name(attacker);
  ModelKind def = model_from_name(defender);
  PGDConfig cfg;
  cfg.seed = seed;

  PlanResult res = optimize_plan(game, att, def, cfg, cfg.n_outer_restarts,
                                 parse_solver(solver));
  AttackPlan rounded = round_plan(res.plan, game.max_attacks_per_step);
  Trajectory traj = simulate_horizon(game, rounded, att, def, cfg, false,
                                     parse_solver(solver));
  BaselineResult base = nonmanipulative_baseline(game, game.horizon);

  nlohmann::json jplan = nlohmann::json::array();
  for (int t = 0; t < rounded.horizon(); ++t) {
    jplan.push_back(std::vector<double>(
        rounded.z.row(t).data(), rounded.z.row(t).data() + rounded.z.cols()));
  }
  nlohmann::json out{
      {"plan", jplan},
      {"relaxed_utility", res.utility},
      {"rounded_att_util_per_step", traj.per_step_att_utility.mean()},
      {"rounded_def_util_per_step", traj.per_step_def_utility.mean()},
      {"baseline_att_util_per_step", base.att_per_step},
      {"baseline_def_util_per_step", base.def_per_step},
      {"converged", res.converged},
      {"outer_iters", res.outer_iters}};
  if (out_path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream(out_path) << out.dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_gen(int n_targets, double r, std::uint64_t seed, double ratio,
            int max_attacks, int horizon, const std::string& out_path) {
  GameInstance game = generate_covariance_game(n_targets, r, seed, ratio,
                                               max_attacks, horizon);
  if (out_path.empty()) {
    nlohmann::json j = game;
    std::cout << j.dump(2) << "\n";
  } else {
    save_game(game, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manipulative attack planning in repeated Stackelberg security games"};
  app.require_subcommand(1);

  std::string config_path, game_path, attacker = "QR", defender = "QR";
  std::string solver = "pgd", out_path;
  double eps = 1e-3, covariance = -0.5, ratio = 0.5;
  int horizon = 0, n_targets = 8, max_attacks = 50, gen_horizon = 2;
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "Run an experiment matrix from a JSON config");
  run->add_option("--config", config_path, "experiment config JSON")->required();

  auto* baseline = app.add_subcommand("baseline", "Non-manipulative SSE baseline for a game");
  baseline->add_option("--game", game_path, "game JSON")->required();
  baseline->add_option("--horizon", horizon, "override game horizon");

  auto* gradcheck = app.add_subcommand("gradcheck", "Check dF/dz against finite differences");
  gradcheck->add_option("--game", game_path, "game JSON")->required();
  gradcheck->add_option("--eps", eps, "FD step size");
  gradcheck->add_option("--attacker", attacker, "attacker-assumed model");
  gradcheck->add_option("--defender", defender, "defender-actual model");
  gradcheck->add_option("--horizon", horizon, "override game horizon");
  gradcheck->add_option("--seed", seed, "pipeline seed");

  auto* plan = app.add_subcommand("plan", "Compute an optimal manipulative attack plan");
  plan->add_option("--game", game_path, "game JSON")->required();
  plan->add_option("--attacker", attacker, "attacker-assumed model")->required();
  plan->add_option("--defender", defender, "defender-actual model")->required();
  plan->add_option("--solver", solver, "defender patrol solver: pgd|interior");
  plan->add_option("--out", out_path, "write result JSON here");
  plan->add_option("--seed", seed, "pipeline seed");

  auto* gen = app.add_subcommand("gen", "Generate a covariance game instance");
  gen->add_option("--targets", n_targets, "number of targets");
  gen->add_option("--covariance", covariance, "payoff correlation in [-1, 0]");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--ratio", ratio, "resource-to-target ratio");
  gen->add_option("--max-attacks", max_attacks, "attacks per step (K)");
  gen->add_option("--horizon", gen_horizon, "time horizon (T)");
  gen->add_option("--out", out_path, "write game JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (baseline->parsed()) return cmd_baseline(game_path, horizon);
    if (gradcheck->parsed()) {
      return cmd_gradcheck(game_path, eps, attacker, defender, horizon, seed);
    }
    if (plan->parsed()) {
      return cmd_plan(game_path, attacker, defender, solver, out_path, seed);
    }
    if (gen->parsed()) {
      return cmd_gen(n_targets, covariance, seed, ratio, max_attacks,
                     gen_horizon, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
