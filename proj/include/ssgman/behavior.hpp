#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssgman/game.hpp"

namespace ssgman {

enum class ModelKind { QR, SUQR, SHARP };

int param_dim(ModelKind kind);
std::string model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);

struct ParamVector {
  ModelKind kind = ModelKind::QR;
  Eigen::VectorXd theta;
};

/// Parameter feasible set Theta = {theta : C theta <= D}, built from per-kind
/// boxes: QR lambda in [0,5]; SUQR w1 in [-15,0], w2 in [0,2], w3 in [-2,0];
/// SHARP adds gamma, delta in [0.3, 3]. Row layout mirrors BudgetBox: upper
/// bounds first, then lower bounds.
struct ParamSpace {
  Eigen::MatrixXd C;
  Eigen::VectorXd D;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;

  static ParamSpace default_box(ModelKind kind);
  static ParamSpace from_box(const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi);
  int dim() const { return static_cast<int>(C.cols()); }
  bool contains(const Eigen::VectorXd& theta, double tol = 1e-8) const;
};

/// History of (strategy, attack-count) pairs the defender learns from.
struct History {
  std::vector<Eigen::VectorXd> strategies;  // x_1 .. x_{t-1}
  std::vector<Eigen::VectorXd> attacks;     // z_1 .. z_{t-1}

  std::size_t size() const { return strategies.size(); }
  void push(Eigen::VectorXd x, Eigen::VectorXd z);
};

/// Behavior score f(x_n, theta). QR: lambda * U^a_n(x_n). SUQR:
/// w1 x + w2 R^a + w3 P^a. SHARP: SUQR with the coverage probability passed
/// through the two-parameter weighting pi(p; gamma, delta) =
/// delta p^gamma / (delta p^gamma + (1-p)^gamma).
double score(ModelKind kind, const GameInstance& game, int n, double x_n,
             const Eigen::VectorXd& theta);

/// First and second partials of the score; everything downstream (softmax
/// gradients, loss Jacobian blocks) is assembled from these.
struct ScoreDerivs {
  double f = 0.0;
  double df_dx = 0.0;
  Eigen::VectorXd df_dtheta;     // m
  double d2f_dx2 = 0.0;
  Eigen::VectorXd d2f_dxdtheta;  // m
  Eigen::MatrixXd d2f_dtheta2;   // m x m
};
ScoreDerivs score_derivs(ModelKind kind, const GameInstance& game, int n,
                         double x_n, const Eigen::VectorXd& theta);

/// Softmax attack distribution q_n = exp(f_n) / sum exp(f_n'), computed with
/// max-subtraction.
Eigen::VectorXd attack_distribution(ModelKind kind, const GameInstance& game,
                                    const CoverageStrategy& x,
                                    const Eigen::VectorXd& theta);

/// Defender's learning loss: attack-count-weighted negative log-likelihood,
/// L = -sum_t sum_n z_{t,n} ln q_n(x_t, theta).
double nll_loss(const GameInstance& game, const History& history,
                ModelKind kind, const Eigen::VectorXd& theta);

Eigen::VectorXd loss_grad_theta(const GameInstance& game,
                                const History& history, ModelKind kind,
                                const Eigen::VectorXd& theta);

/// Second-derivative blocks of the loss gradient H = dL/dtheta.
struct LossJacobians {
  Eigen::MatrixXd wrt_theta;               // m x m
  std::vector<Eigen::MatrixXd> wrt_x;      // per history step, m x N
  std::vector<Eigen::MatrixXd> wrt_z;      // per history step, m x N
};
LossJacobians loss_jacobian_blocks(const GameInstance& game,
                                   const History& history, ModelKind kind,
                                   const Eigen::VectorXd& theta);

void to_json(nlohmann::json& j, const ParamVector& p);
void from_json(const nlohmann::json& j, ParamVector& p);

}  // namespace ssgman
