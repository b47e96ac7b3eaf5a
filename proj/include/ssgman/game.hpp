#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace ssgman {

enum class PolytopeForm { BudgetBox, General };

/// Linear-inequality strategy space {x : A x <= b}, nonempty and bounded.
/// BudgetBox(R) is the canonical marginal-coverage polytope
/// {0 <= x_n <= 1, sum x_n <= R}; its row layout is fixed: upper box bounds
/// (rows 0..N-1), lower box bounds (rows N..2N-1), budget (row 2N).
struct StrategyPolytope {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  PolytopeForm form = PolytopeForm::General;
  double budget = 0.0;  // meaningful only for BudgetBox

  static StrategyPolytope budget_box(int n_targets, double budget);
  static StrategyPolytope general(Eigen::MatrixXd A, Eigen::VectorXd b);

  int dim() const { return static_cast<int>(A.cols()); }
  bool contains(const Eigen::VectorXd& x, double tol = 1e-8) const;
};

struct CoverageStrategy {
  Eigen::VectorXd x;  // per-target marginal coverage probabilities
};

struct GameInstance {
  int n_targets = 0;
  Eigen::VectorXd att_reward;   // R^a, in [0, 10]
  Eigen::VectorXd att_penalty;  // P^a, in [-10, 0]
  Eigen::VectorXd def_reward;   // R^d, in [0, 10]
  Eigen::VectorXd def_penalty;  // P^d, in [-10, 0]
  StrategyPolytope strategy_space;
  int max_attacks_per_step = 0;  // K
  int horizon = 1;               // T
  double covariance_r = 0.0;     // generator metadata
  std::uint64_t seed = 0;        // generator metadata

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

double def_utility_at(const GameInstance& game, int n, double x_n);
double att_utility_at(const GameInstance& game, int n, double x_n);

/// Attacker's expected utility for one step: sum_n z_n * U^a_n(x_n).
double att_step_utility(const GameInstance& game, const CoverageStrategy& x,
                        const Eigen::VectorXd& z);

/// Random game with correlation r in [-1, 0] between the players' payoffs:
/// defender payoffs are the (-r)-weighted mix of the negated attacker payoffs
/// and fresh independent draws, so r = -1 is exactly zero-sum and r = 0 is
/// independent. Strategy space is BudgetBox(ceil(ratio * N)).
GameInstance generate_covariance_game(int n_targets, double r,
                                      std::uint64_t seed, double ratio,
                                      int max_attacks = 50, int horizon = 1);

struct SseSolution {
  CoverageStrategy x;
  int target = -1;       // attacker best response, ties in defender's favor
  double def_utility = 0.0;
  double att_utility = 0.0;
};

/// Strong Stackelberg Equilibrium via the multiple-LP method: one LP per
/// candidate attacked target, best feasible candidate wins (ties -> lowest
/// target index).
SseSolution solve_sse(const GameInstance& game);

void to_json(nlohmann::json& j, const GameInstance& game);
void from_json(const nlohmann::json& j, GameInstance& game);
GameInstance load_game(const std::string& path);
void save_game(const GameInstance& game, const std::string& path);

}  // namespace ssgman
