#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssgman/defender.hpp"

namespace ssgman {

/// T x N nonnegative attack-count matrix, row sums <= K (relaxed to reals
/// while optimizing).
struct AttackPlan {
  Eigen::MatrixXd z;

  int horizon() const { return static_cast<int>(z.rows()); }
  void validate(const GameInstance& game) const;
};

/// Gradient blocks the attacker carries for one step t >= 2.
struct StepGradients {
  Eigen::MatrixXd dx_dtheta;               // N x m
  std::vector<Eigen::MatrixXd> dtheta_dz;  // per t' = 1..t-1, each m x N
};

struct Trajectory {
  std::vector<Eigen::VectorXd> strategies;  // x_1..x_T (x_1 = SSE)
  std::vector<ParamVector> params;          // theta_2..theta_T
  std::vector<StepGradients> grads;         // for t = 2..T (with_grads only)
  double total_utility = 0.0;               // F
  int sse_target = -1;
  bool degenerate = false;  // some projection along the way was weakly active

  Eigen::VectorXd per_step_att_utility;  // length T
  Eigen::VectorXd per_step_def_utility;  // length T, sum_n z_{t,n} U^d_n
};

/// Replays the defender's learn-then-patrol loop over the horizon. The
/// defender's theta_t and x_t use defender_model and defender_solver; when
/// with_grads is set, the gradient blocks are computed under the attacker's
/// assumed model and assumed PGD computation (they coincide in matched runs).
Trajectory simulate_horizon(const GameInstance& game, const AttackPlan& plan,
                            ModelKind attacker_model, ModelKind defender_model,
                            const PGDConfig& cfg, bool with_grads,
                            PatrolSolver defender_solver = PatrolSolver::PGD);

/// Replays one learning trace and accumulates dtheta_t/dz_{t'} for every
/// t' < t, composing through each projection and using each iterate's
/// accepted step size. dx_dz_prev[t''] holds dx_{t''}/dz_{t'} blocks for
/// history steps.
std::vector<Eigen::MatrixXd> grad_theta_wrt_z(
    const GameInstance& game, const LearnResult& learn, const History& history,
    ModelKind attacker_model, const ParamSpace& space,
    const std::vector<std::vector<Eigen::MatrixXd>>& dx_dz_prev);

/// dF/dz: direct per-step utility term plus the downstream influence through
/// the defender's learned parameters; blocks with t' >= t contribute nothing.
Eigen::MatrixXd total_gradient(const Trajectory& traj, const GameInstance& game,
                               const AttackPlan& plan);

struct PlanResult {
  AttackPlan plan;
  Trajectory traj;
  double utility = 0.0;
  bool converged = false;
  int outer_iters = 0;
};

/// Outer projected gradient ascent over attack plans (row-wise capped-simplex
/// projection), with backtracking halving and multi-restart.
PlanResult optimize_plan(const GameInstance& game, ModelKind attacker_model,
                         ModelKind defender_model, const PGDConfig& cfg,
                         int n_outer_restarts,
                         PatrolSolver defender_solver = PatrolSolver::PGD);

/// Largest-fractional-part rounding per row; row sums become
/// min(floor(sum), K), ties to the lowest target index.
AttackPlan round_plan(const AttackPlan& plan, double cap);

struct BaselineResult {
  AttackPlan plan;
  Trajectory traj;
  double att_per_step = 0.0;
  double def_per_step = 0.0;
};

/// Both players repeat the SSE play: the defender patrols the SSE strategy,
/// the attacker puts all K attacks on the SSE best-response target.
BaselineResult nonmanipulative_baseline(const GameInstance& game, int horizon);

}  // namespace ssgman
