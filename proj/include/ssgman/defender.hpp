#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ssgman/behavior.hpp"
#include "ssgman/game.hpp"
#include "ssgman/projection.hpp"

namespace ssgman {

/// Step sizes, restart counts and tolerances for the three nested PGD loops
/// (defender patrol, defender learning, attacker outer plan ascent).
struct PGDConfig {
  double patrol_alpha = 0.01;
  double learn_alpha = 0.05;
  double outer_alpha = 0.5;
  int n_rounds = 5;          // inner-solver restarts (nRound)
  int max_iters = 500;       // per inner restart
  int outer_max_iters = 200;
  int n_outer_restarts = 5;
  int max_halvings = 20;     // outer backtracking budget
  double utility_tol = 1e-7;
  double loss_tol = 1e-7;
  std::uint64_t seed = 0;
  bool warm_start = false;   // learning warm-starts from the previous theta

  void validate() const;
};

enum class PatrolSolver { PGD, InteriorAlt };

struct PatrolOutcome {
  CoverageStrategy x;
  double utility = 0.0;
  Eigen::MatrixXd dx_dtheta;  // N x m (zero for InteriorAlt)
  PatrolSolver solver = PatrolSolver::PGD;
};

/// U^d(x, theta) = sum_n q_n(x, theta) U^d_n(x_n).
double defender_utility(const GameInstance& game, const CoverageStrategy& x,
                        const Eigen::VectorXd& theta, ModelKind kind);

struct UtilityGrads {
  Eigen::VectorXd g;        // N: dU^d/dx
  Eigen::MatrixXd j_x;      // N x N: dG/dx
  Eigen::MatrixXd j_theta;  // N x m: dG/dtheta
};
UtilityGrads defender_utility_grad(const GameInstance& game,
                                   const CoverageStrategy& x,
                                   const Eigen::VectorXd& theta,
                                   ModelKind kind);

/// Multi-restart projected gradient ascent on U^d, differentiating through
/// every iterate and projection to obtain dx/dtheta; best restart by utility,
/// ties by lowest restart index. seed_salt keeps per-step streams independent
/// of the attack plan.
PatrolOutcome patrol_pgd_with_grad(const GameInstance& game,
                                   const ParamVector& theta,
                                   const PGDConfig& cfg,
                                   std::uint64_t seed_salt = 0);

/// Non-PGD patrol maximizer: log-barrier interior point with damped Newton
/// inner steps, barrier scaled by 0.2 per outer round, multi-start. Used as
/// the "actual defender" in solver-mismatch runs; dx_dtheta is zero.
PatrolOutcome patrol_alt(const GameInstance& game, const ParamVector& theta,
                         const PGDConfig& cfg, std::uint64_t seed_salt = 0);

/// One accepted learning iterate: the point where the loss gradient was
/// evaluated, the projection applied to the raw update, and the step size
/// the backtracking search accepted. The attacker's recursion replays these.
struct LearnIterate {
  Eigen::VectorXd theta_pre;  // theta^{i-1,proj}
  ProjectionResult proj;      // projection of theta^i
  double alpha = 0.0;         // accepted step size for this iterate
};

struct LearnResult {
  ParamVector theta;
  double loss = 0.0;
  std::vector<LearnIterate> trace;  // best restart only
  int restart_index = 0;
  bool any_degenerate_projection = false;
};

/// Multi-restart projected gradient descent on the weighted NLL; records the
/// full iterate trace of the winning restart. Throws on empty history.
LearnResult learn_theta(const GameInstance& game, const History& history,
                        ModelKind kind, const ParamSpace& space,
                        const PGDConfig& cfg, std::uint64_t seed_salt = 0,
                        const Eigen::VectorXd* warm_start_point = nullptr);

}  // namespace ssgman
