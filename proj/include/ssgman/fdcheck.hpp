#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ssgman/planner.hpp"

namespace ssgman {

/// Central finite difference of a scalar function of a vector.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h);

/// Central finite difference of a vector function of a vector; column j is
/// d(f)/d(x_j).
Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h);

/// Finite difference of the full frozen-seed pipeline's accumulated attacker
/// utility F with respect to every plan entry. The independent oracle for
/// total_gradient.
Eigen::MatrixXd fd_plan_gradient(const GameInstance& game,
                                 const AttackPlan& plan,
                                 ModelKind attacker_model,
                                 ModelKind defender_model, const PGDConfig& cfg,
                                 double h,
                                 PatrolSolver defender_solver = PatrolSolver::PGD);

/// Worst-entry relative error; denominators are floored at a fraction of the
/// reference matrix's largest magnitude so near-zero entries do not dominate.
double max_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace ssgman
