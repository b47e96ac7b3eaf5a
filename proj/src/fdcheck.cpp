#include "ssgman/fdcheck.hpp"

#include <algorithm>
#include <cmath>

namespace ssgman {

Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    g(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (int j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

Eigen::MatrixXd fd_plan_gradient(const GameInstance& game,
                                 const AttackPlan& plan,
                                 ModelKind attacker_model,
                                 ModelKind defender_model, const PGDConfig& cfg,
                                 double h, PatrolSolver defender_solver) {
  Eigen::MatrixXd grad(plan.z.rows(), plan.z.cols());
  for (int t = 0; t < plan.z.rows(); ++t) {
    for (int n = 0; n < plan.z.cols(); ++n) {
      AttackPlan p = plan, m = plan;
      p.z(t, n) += h;
      m.z(t, n) -= h;
      double fp = simulate_horizon(game, p, attacker_model, defender_model,
                                   cfg, false, defender_solver)
                      .total_utility;
      double fm = simulate_horizon(game, m, attacker_model, defender_model,
                                   cfg, false, defender_solver)
                      .total_utility;
      grad(t, n) = (fp - fm) / (2.0 * h);
    }
  }
  return grad;
}

double max_rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  double floor = std::max(1e-12, 1e-3 * scale);
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      double denom = std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  }
  return worst;
}

}  // namespace ssgman
