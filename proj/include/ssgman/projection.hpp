#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssgman/game.hpp"

namespace ssgman {

constexpr double kTolFeas = 1e-8;
constexpr double kTolActive = 1e-7;

struct ProjectionResult {
  Eigen::VectorXd point;
  Eigen::VectorXd duals;          // one per constraint row, >= 0
  std::vector<bool> active_mask;  // |A point - b| <= kTolActive
  bool degenerate = false;        // weakly active row (slack ~ 0, dual ~ 0)
};

/// Euclidean projection onto {z >= 0, sum z <= cap}: clamp negatives, then
/// shift positive entries by a uniform tau found by sorting when the cap binds.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double cap);

/// Euclidean projection onto {x : A x <= b} via a primal active-set loop on
/// the squared-distance objective. Throws std::runtime_error on
/// non-convergence (max 100 * rows iterations).
ProjectionResult project_polytope(const Eigen::VectorXd& v,
                                  const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b);

/// Same, with a closed-form fast path for BudgetBox polytopes (clamp to
/// [0, 1], then water-fill the budget; duals recovered analytically).
ProjectionResult project_polytope(const Eigen::VectorXd& v,
                                  const StrategyPolytope& space);

/// d(point)/d(input) from the KKT implicit-function system with identity
/// Hessian. On a nondegenerate active set this is the orthogonal projector
/// onto the null space of the strictly-active rows.
Eigen::MatrixXd projection_jacobian(const ProjectionResult& result,
                                    const Eigen::MatrixXd& A);

}  // namespace ssgman
