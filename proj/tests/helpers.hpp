#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <initializer_list>

#include "ssgman/game.hpp"
#include "ssgman/rng.hpp"

namespace ssgman::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Hand-built instance with a BudgetBox strategy space.
inline GameInstance make_game(const Eigen::VectorXd& att_reward,
                              const Eigen::VectorXd& att_penalty,
                              const Eigen::VectorXd& def_reward,
                              const Eigen::VectorXd& def_penalty,
                              double budget, int max_attacks = 10,
                              int horizon = 1) {
  GameInstance g;
  g.n_targets = static_cast<int>(att_reward.size());
  g.att_reward = att_reward;
  g.att_penalty = att_penalty;
  g.def_reward = def_reward;
  g.def_penalty = def_penalty;
  g.strategy_space = StrategyPolytope::budget_box(g.n_targets, budget);
  g.max_attacks_per_step = max_attacks;
  g.horizon = horizon;
  g.validate();
  return g;
}

/// Random valid instance; payoff gaps bounded away from zero.
inline GameInstance random_game(int n_targets, Rng& rng, double budget,
                                int max_attacks = 10, int horizon = 1) {
  Eigen::VectorXd ra(n_targets), pa(n_targets), rd(n_targets), pd(n_targets);
  for (int n = 0; n < n_targets; ++n) {
    ra(n) = rng.uniform(0.5, 10.0);
    pa(n) = rng.uniform(-10.0, -0.5);
    rd(n) = rng.uniform(0.5, 10.0);
    pd(n) = rng.uniform(-10.0, -0.5);
  }
  return make_game(ra, pa, rd, pd, budget, max_attacks, horizon);
}

/// Random strictly interior coverage for a BudgetBox game.
inline Eigen::VectorXd interior_coverage(const GameInstance& game, Rng& rng) {
  const int n = game.n_targets;
  double cap = 0.9 * game.strategy_space.budget / n;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform(0.05, std::min(0.95, cap));
  return x;
}

/// Random parameter strictly inside the default box for the kind.
inline Eigen::VectorXd interior_theta(const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi, Rng& rng) {
  Eigen::VectorXd th(lo.size());
  for (int j = 0; j < lo.size(); ++j) {
    double margin = 0.05 * (hi(j) - lo(j));
    th(j) = rng.uniform(lo(j) + margin, hi(j) - margin);
  }
  return th;
}

}  // namespace ssgman::testing
