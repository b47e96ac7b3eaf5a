#include "ssgman/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ssgman/rng.hpp"

namespace ssgman {

void AttackPlan::validate(const GameInstance& game) const {
  if (z.cols() != game.n_targets) {
    throw std::invalid_argument("AttackPlan: column count != n_targets");
  }
  if (z.rows() < 1) throw std::invalid_argument("AttackPlan: empty horizon");
  for (int t = 0; t < z.rows(); ++t) {
    if ((z.row(t).array() < -1e-12).any()) {
      throw std::invalid_argument("AttackPlan: negative attack count");
    }
    if (z.row(t).sum() > game.max_attacks_per_step + 1e-8) {
      throw std::invalid_argument("AttackPlan: row sum exceeds K");
    }
  }
}

namespace {

// Seed salts for the per-step inner solvers. Derived from (seed, step,
// restart) only; never from the plan, so finite differences in z see a
// deterministic pipeline.
constexpr std::uint64_t kLearnSalt = 0x11;
constexpr std::uint64_t kPatrolSalt = 0x22;

double step_def_utility(const GameInstance& game, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& z) {
  double u = 0.0;
  for (int n = 0; n < game.n_targets; ++n) {
    u += z(n) * def_utility_at(game, n, x(n));
  }
  return u;
}

}  // namespace

std::vector<Eigen::MatrixXd> grad_theta_wrt_z(
    const GameInstance& game, const LearnResult& learn, const History& history,
    ModelKind attacker_model, const ParamSpace& space,
    const std::vector<std::vector<Eigen::MatrixXd>>& dx_dz_prev) {
  const int m = param_dim(attacker_model);
  const int n_targets = game.n_targets;
  const int n_hist = static_cast<int>(history.size());
  if (static_cast<int>(dx_dz_prev.size()) != n_hist) {
    throw std::invalid_argument("grad_theta_wrt_z: dx_dz_prev size mismatch");
  }

  std::vector<Eigen::MatrixXd> d(static_cast<std::size_t>(n_hist),
                                 Eigen::MatrixXd::Zero(m, n_targets));
  for (const LearnIterate& it : learn.trace) {
    LossJacobians jac =
        loss_jacobian_blocks(game, history, attacker_model, it.theta_pre);
    Eigen::MatrixXd proj_jac = projection_jacobian(it.proj, space.C);
    for (int tp = 0; tp < n_hist; ++tp) {
      Eigen::MatrixXd raw = jac.wrt_z[static_cast<std::size_t>(tp)] +
                            jac.wrt_theta * d[static_cast<std::size_t>(tp)];
      for (int tpp = tp + 1; tpp < n_hist; ++tpp) {
        raw += jac.wrt_x[static_cast<std::size_t>(tpp)] *
               dx_dz_prev[static_cast<std::size_t>(tpp)]
                         [static_cast<std::size_t>(tp)];
      }
      d[static_cast<std::size_t>(tp)] =
          proj_jac * (d[static_cast<std::size_t>(tp)] - it.alpha * raw);
    }
  }
  return d;
}

Trajectory simulate_horizon(const GameInstance& game, const AttackPlan& plan,
                            ModelKind attacker_model, ModelKind defender_model,
                            const PGDConfig& cfg, bool with_grads,
                            PatrolSolver defender_solver) {
  plan.validate(game);
  cfg.validate();
  const int horizon = plan.horizon();
  const int n_targets = game.n_targets;

  Trajectory traj;
  traj.per_step_att_utility.setZero(horizon);
  traj.per_step_def_utility.setZero(horizon);

  SseSolution sse = solve_sse(game);
  traj.strategies.push_back(sse.x.x);
  traj.sse_target = sse.target;

  const ParamSpace def_space = ParamSpace::default_box(defender_model);
  const ParamSpace att_space = ParamSpace::default_box(attacker_model);
  const bool matched =
      attacker_model == defender_model && defender_solver == PatrolSolver::PGD;

  History history;
  // dx_{t''}/dz_{t'} for completed steps, ragged: row t''-1 holds blocks for
  // t' = 1..t''-1. Step 1 is the SSE strategy, independent of every z.
  std::vector<std::vector<Eigen::MatrixXd>> dx_dz;
  dx_dz.push_back({});

  Eigen::VectorXd warm_value;
  const Eigen::VectorXd* warm = nullptr;
  for (int t = 2; t <= horizon; ++t) {
    history.push(traj.strategies.back(), plan.z.row(t - 2).transpose());

    LearnResult lr;
    try {
      lr = learn_theta(game, history, defender_model, def_space, cfg,
                       Rng::derive(kLearnSalt, static_cast<std::uint64_t>(t)),
                       warm);
    } catch (const std::exception& e) {
      throw std::runtime_error("simulate_horizon: learning failed at step " +
                               std::to_string(t) + ": " + e.what());
    }
    if (cfg.warm_start) {
      warm_value = lr.theta.theta;
      warm = &warm_value;
    }

    PatrolOutcome po;
    try {
      std::uint64_t salt =
          Rng::derive(kPatrolSalt, static_cast<std::uint64_t>(t));
      po = (defender_solver == PatrolSolver::PGD)
               ? patrol_pgd_with_grad(game, lr.theta, cfg, salt)
               : patrol_alt(game, lr.theta, cfg, salt);
    } catch (const std::exception& e) {
      throw std::runtime_error("simulate_horizon: patrol failed at step " +
                               std::to_string(t) + ": " + e.what());
    }
    traj.strategies.push_back(po.x.x);
    traj.params.push_back(lr.theta);

    if (with_grads) {
      // The attacker's assumed computation: its own model and a PGD defender.
      LearnResult lr_att;
      PatrolOutcome po_att;
      if (matched) {
        lr_att = lr;
        po_att = po;
      } else {
        lr_att = learn_theta(
            game, history, attacker_model, att_space, cfg,
            Rng::derive(kLearnSalt, static_cast<std::uint64_t>(t)));
        po_att = patrol_pgd_with_grad(
            game, lr_att.theta, cfg,
            Rng::derive(kPatrolSalt, static_cast<std::uint64_t>(t)));
      }
      traj.degenerate = traj.degenerate || lr_att.any_degenerate_projection;

      StepGradients sg;
      sg.dx_dtheta = po_att.dx_dtheta;
      sg.dtheta_dz = grad_theta_wrt_z(game, lr_att, history, attacker_model,
                                      att_space, dx_dz);
      // Record dx_t/dz_{t'} for future steps' recursions.
      std::vector<Eigen::MatrixXd> row;
      for (int tp = 1; tp < t; ++tp) {
        row.push_back(sg.dx_dtheta *
                      sg.dtheta_dz[static_cast<std::size_t>(tp - 1)]);
      }
      dx_dz.push_back(std::move(row));
      traj.grads.push_back(std::move(sg));
    }
  }

  for (int t = 0; t < horizon; ++t) {
    Eigen::VectorXd z_t = plan.z.row(t).transpose();
    traj.per_step_att_utility(t) =
        att_step_utility(game, {traj.strategies[static_cast<std::size_t>(t)]},
                         z_t);
    traj.per_step_def_utility(t) = step_def_utility(
        game, traj.strategies[static_cast<std::size_t>(t)], z_t);
  }
  traj.total_utility = traj.per_step_att_utility.sum();
  return traj;
}

Eigen::MatrixXd total_gradient(const Trajectory& traj, const GameInstance& game,
                               const AttackPlan& plan) {
  const int horizon = plan.horizon();
  const int n_targets = game.n_targets;
  if (static_cast<int>(traj.grads.size()) != horizon - 1) {
    throw std::invalid_argument(
        "total_gradient: trajectory was not built with gradients");
  }

  Eigen::MatrixXd grad(horizon, n_targets);
  Eigen::VectorXd att_slope = game.att_penalty - game.att_reward;  // P^a - R^a
  for (int tp = 1; tp <= horizon; ++tp) {
    for (int n = 0; n < n_targets; ++n) {
      grad(tp - 1, n) = att_utility_at(
          game, n, traj.strategies[static_cast<std::size_t>(tp - 1)](n));
    }
    // Influence on future steps through the learned parameters (t > t' only).
    for (int t = tp + 1; t <= horizon; ++t) {
      const StepGradients& sg = traj.grads[static_cast<std::size_t>(t - 2)];
      Eigen::MatrixXd dx_dz =
          sg.dx_dtheta * sg.dtheta_dz[static_cast<std::size_t>(tp - 1)];
      Eigen::VectorXd w =
          plan.z.row(t - 1).transpose().cwiseProduct(att_slope);
      grad.row(tp - 1) += w.transpose() * dx_dz;
    }
  }
  return grad;
}

PlanResult optimize_plan(const GameInstance& game, ModelKind attacker_model,
                         ModelKind defender_model, const PGDConfig& cfg,
                         int n_outer_restarts, PatrolSolver defender_solver) {
  cfg.validate();
  const int horizon = game.horizon;
  const int n_targets = game.n_targets;
  const double cap = game.max_attacks_per_step;

  auto project_rows = [&](Eigen::MatrixXd z) {
    for (int t = 0; t < z.rows(); ++t) {
      z.row(t) =
          project_capped_simplex(z.row(t).transpose(), cap).transpose();
    }
    return z;
  };

  PlanResult best;
  double best_f = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < n_outer_restarts; ++restart) {
    Rng rng(Rng::derive(cfg.seed, 0x9147u,
                        static_cast<std::uint64_t>(restart)));
    Eigen::MatrixXd z(horizon, n_targets);
    for (int t = 0; t < horizon; ++t) {
      for (int n = 0; n < n_targets; ++n) z(t, n) = rng.uniform(0.0, cap);
    }
    AttackPlan plan{project_rows(z)};
    Trajectory traj = simulate_horizon(game, plan, attacker_model,
                                       defender_model, cfg, true,
                                       defender_solver);
    double f = traj.total_utility;

    bool converged = false;
    int iters = 0;
    for (; iters < cfg.outer_max_iters; ++iters) {
      Eigen::MatrixXd g = total_gradient(traj, game, plan);
      double alpha = cfg.outer_alpha;
      bool accepted = false;
      AttackPlan trial;
      double trial_f = 0.0;
      for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
        trial.z = project_rows(plan.z + alpha * g);
        trial_f = simulate_horizon(game, trial, attacker_model, defender_model,
                                   cfg, false, defender_solver)
                      .total_utility;
        if (trial_f > f + cfg.utility_tol) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        converged = true;
        break;
      }
      plan = trial;
      traj = simulate_horizon(game, plan, attacker_model, defender_model, cfg,
                              true, defender_solver);
      f = traj.total_utility;
    }

    if (f > best_f) {
      best_f = f;
      best.plan = plan;
      best.traj = std::move(traj);
      best.utility = f;
      best.converged = converged;
      best.outer_iters = iters;
    }
  }
  return best;
}

AttackPlan round_plan(const AttackPlan& plan, double cap) {
  const int horizon = plan.horizon();
  const int n_targets = static_cast<int>(plan.z.cols());
  AttackPlan out;
  out.z.setZero(horizon, n_targets);
  const long cap_int = static_cast<long>(std::floor(cap + 1e-9));
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> frac(static_cast<std::size_t>(n_targets));
    long floor_sum = 0;
    for (int n = 0; n < n_targets; ++n) {
      double f = std::floor(plan.z(t, n) + 1e-12);
      out.z(t, n) = f;
      floor_sum += static_cast<long>(f);
      frac[static_cast<std::size_t>(n)] = plan.z(t, n) - f;
    }
    long target =
        std::min(static_cast<long>(std::floor(plan.z.row(t).sum() + 1e-9)),
                 cap_int);
    long remaining = target - floor_sum;
    std::vector<int> order(static_cast<std::size_t>(n_targets));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return frac[static_cast<std::size_t>(a)] >
             frac[static_cast<std::size_t>(b)];
    });
    for (long k = 0; k < remaining && k < n_targets; ++k) {
      out.z(t, order[static_cast<std::size_t>(k)]) += 1.0;
    }
  }
  return out;
}

BaselineResult nonmanipulative_baseline(const GameInstance& game, int horizon) {
  if (horizon <= 0) throw std::invalid_argument("baseline: horizon <= 0");
  SseSolution sse = solve_sse(game);
  const double k = game.max_attacks_per_step;

  BaselineResult res;
  res.plan.z.setZero(horizon, game.n_targets);
  res.plan.z.col(sse.target).setConstant(k);
  res.traj.sse_target = sse.target;
  res.traj.per_step_att_utility.setConstant(horizon, k * sse.att_utility);
  res.traj.per_step_def_utility.setConstant(horizon, k * sse.def_utility);
  for (int t = 0; t < horizon; ++t) res.traj.strategies.push_back(sse.x.x);
  res.traj.total_utility = res.traj.per_step_att_utility.sum();
  res.att_per_step = k * sse.att_utility;
  res.def_per_step = k * sse.def_utility;
  return res;
}

}  // namespace ssgman
