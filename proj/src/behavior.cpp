#include "ssgman/behavior.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ssgman {

int param_dim(ModelKind kind) {
  switch (kind) {
    case ModelKind::QR: return 1;
    case ModelKind::SUQR: return 3;
    case ModelKind::SHARP: return 5;
  }
  throw std::invalid_argument("param_dim: bad kind");
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::QR: return "QR";
    case ModelKind::SUQR: return "SUQR";
    case ModelKind::SHARP: return "SHARP";
  }
  throw std::invalid_argument("model_name: bad kind");
}

ModelKind model_from_name(const std::string& name) {
  if (name == "QR") return ModelKind::QR;
  if (name == "SUQR") return ModelKind::SUQR;
  if (name == "SHARP") return ModelKind::SHARP;
  throw std::invalid_argument("unknown model kind: " + name);
}

ParamSpace ParamSpace::from_box(const Eigen::VectorXd& lo,
                                const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size() || (hi.array() < lo.array()).any()) {
    throw std::invalid_argument("ParamSpace: bad box");
  }
  const int m = static_cast<int>(lo.size());
  ParamSpace s;
  s.C.setZero(2 * m, m);
  s.D.resize(2 * m);
  for (int j = 0; j < m; ++j) {
    s.C(j, j) = 1.0;
    s.D(j) = hi(j);
    s.C(m + j, j) = -1.0;
    s.D(m + j) = -lo(j);
  }
  s.box_lo = lo;
  s.box_hi = hi;
  return s;
}

ParamSpace ParamSpace::default_box(ModelKind kind) {
  switch (kind) {
    case ModelKind::QR: {
      Eigen::VectorXd lo(1), hi(1);
      lo << 0.0;
      hi << 5.0;
      return from_box(lo, hi);
    }
    case ModelKind::SUQR: {
      Eigen::VectorXd lo(3), hi(3);
      lo << -15.0, 0.0, -2.0;
      hi << 0.0, 2.0, 0.0;
      return from_box(lo, hi);
    }
    case ModelKind::SHARP: {
      Eigen::VectorXd lo(5), hi(5);
      lo << -15.0, 0.0, -2.0, 0.3, 0.3;
      hi << 0.0, 2.0, 0.0, 3.0, 3.0;
      return from_box(lo, hi);
    }
  }
  throw std::invalid_argument("ParamSpace: bad kind");
}

bool ParamSpace::contains(const Eigen::VectorXd& theta, double tol) const {
  if (theta.size() != C.cols()) return false;
  return ((C * theta - D).array() <= tol).all();
}

void History::push(Eigen::VectorXd x, Eigen::VectorXd z) {
  strategies.push_back(std::move(x));
  attacks.push_back(std::move(z));
}

namespace {

constexpr double kSharpClamp = 1e-6;

// Gonzalez-Wu probability weighting pi(p; gamma, delta) and all first/second
// partials needed by the loss Jacobian blocks. Shorthand: a = delta p^gamma,
// b = (1-p)^gamma, S = a + b.
struct PiDerivs {
  double pi, dp, dg, dd;
  double dpp, dpg, dpd, dgg, dgd, ddd;
};

PiDerivs weighting_derivs(double p, double gamma, double delta) {
  const double a = delta * std::pow(p, gamma);
  const double b = std::pow(1.0 - p, gamma);
  const double s = a + b;
  const double la = std::log(p);
  const double lb = std::log(1.0 - p);
  const double c = 1.0 / (p * (1.0 - p));
  const double s2 = s * s;
  const double s3 = s2 * s;

  PiDerivs d;
  d.pi = a / s;
  d.dp = gamma * a * b * c / s2;
  d.dg = a * b * (la - lb) / s2;
  d.dd = a * b / (delta * s2);

  const double mix = (la + lb) - 2.0 * (a * la + b * lb) / s;
  d.dgg = d.dg * mix;
  d.dgd = (la - lb) * a * b * (b - a) / (delta * s3);
  d.ddd = -2.0 * a * a * b / (delta * delta * s3);
  d.dpg = c * (a * b / s2) * (1.0 + gamma * mix);
  d.dpd = gamma * c * a * b * (b - a) / (delta * s3);

  const double dc = c * c * (2.0 * p - 1.0);
  const double dab = gamma * a * b * c * (1.0 - 2.0 * p);
  const double ds = gamma * (a / p - b / (1.0 - p));
  const double dabs2 = (dab * s - 2.0 * a * b * ds) / s3;
  d.dpp = gamma * (dc * a * b / s2 + c * dabs2);
  return d;
}

void check_inputs(ModelKind kind, const GameInstance& game, int n,
                  const Eigen::VectorXd& theta) {
  if (n < 0 || n >= game.n_targets) throw std::out_of_range("score: target index");
  if (theta.size() != param_dim(kind)) {
    throw std::invalid_argument("score: parameter dimension mismatch");
  }
}

}  // namespace

double score(ModelKind kind, const GameInstance& game, int n, double x_n,
             const Eigen::VectorXd& theta) {
  check_inputs(kind, game, n, theta);
  switch (kind) {
    case ModelKind::QR:
      return theta(0) * att_utility_at(game, n, x_n);
    case ModelKind::SUQR:
      return theta(0) * x_n + theta(1) * game.att_reward(n) +
             theta(2) * game.att_penalty(n);
    case ModelKind::SHARP: {
      double p = std::min(1.0 - kSharpClamp, std::max(kSharpClamp, x_n));
      double pi = weighting_derivs(p, theta(3), theta(4)).pi;
      return theta(0) * pi + theta(1) * game.att_reward(n) +
             theta(2) * game.att_penalty(n);
    }
  }
  throw std::invalid_argument("score: bad kind");
}

ScoreDerivs score_derivs(ModelKind kind, const GameInstance& game, int n,
                         double x_n, const Eigen::VectorXd& theta) {
  check_inputs(kind, game, n, theta);
  const int m = param_dim(kind);
  ScoreDerivs d;
  d.df_dtheta.setZero(m);
  d.d2f_dxdtheta.setZero(m);
  d.d2f_dtheta2.setZero(m, m);
  switch (kind) {
    case ModelKind::QR: {
      double u = att_utility_at(game, n, x_n);
      double slope = game.att_penalty(n) - game.att_reward(n);
      d.f = theta(0) * u;
      d.df_dx = theta(0) * slope;
      d.df_dtheta(0) = u;
      d.d2f_dxdtheta(0) = slope;
      break;
    }
    case ModelKind::SUQR: {
      d.f = theta(0) * x_n + theta(1) * game.att_reward(n) +
            theta(2) * game.att_penalty(n);
      d.df_dx = theta(0);
      d.df_dtheta << x_n, game.att_reward(n), game.att_penalty(n);
      d.d2f_dxdtheta(0) = 1.0;
      break;
    }
    case ModelKind::SHARP: {
      double p = std::min(1.0 - kSharpClamp, std::max(kSharpClamp, x_n));
      PiDerivs w = weighting_derivs(p, theta(3), theta(4));
      const double w1 = theta(0);
      d.f = w1 * w.pi + theta(1) * game.att_reward(n) +
            theta(2) * game.att_penalty(n);
      d.df_dx = w1 * w.dp;
      d.df_dtheta << w.pi, game.att_reward(n), game.att_penalty(n), w1 * w.dg,
          w1 * w.dd;
      d.d2f_dx2 = w1 * w.dpp;
      d.d2f_dxdtheta << w.dp, 0.0, 0.0, w1 * w.dpg, w1 * w.dpd;
      d.d2f_dtheta2(0, 3) = d.d2f_dtheta2(3, 0) = w.dg;
      d.d2f_dtheta2(0, 4) = d.d2f_dtheta2(4, 0) = w.dd;
      d.d2f_dtheta2(3, 3) = w1 * w.dgg;
      d.d2f_dtheta2(3, 4) = d.d2f_dtheta2(4, 3) = w1 * w.dgd;
      d.d2f_dtheta2(4, 4) = w1 * w.ddd;
      break;
    }
  }
  return d;
}

Eigen::VectorXd attack_distribution(ModelKind kind, const GameInstance& game,
                                    const CoverageStrategy& x,
                                    const Eigen::VectorXd& theta) {
  const int n_targets = game.n_targets;
  if (x.x.size() != n_targets) {
    throw std::invalid_argument("attack_distribution: strategy length");
  }
  Eigen::VectorXd f(n_targets);
  for (int n = 0; n < n_targets; ++n) {
    f(n) = score(kind, game, n, x.x(n), theta);
  }
  Eigen::VectorXd e = (f.array() - f.maxCoeff()).exp();
  return e / e.sum();
}

namespace {

// Per-step softmax quantities reused by the loss derivatives.
struct StepScores {
  Eigen::VectorXd q;                 // N
  std::vector<ScoreDerivs> derivs;   // per target
  double lse = 0.0;                  // log sum exp of scores
};

StepScores step_scores(const GameInstance& game, ModelKind kind,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& theta) {
  const int n_targets = game.n_targets;
  StepScores s;
  s.derivs.reserve(static_cast<std::size_t>(n_targets));
  Eigen::VectorXd f(n_targets);
  for (int n = 0; n < n_targets; ++n) {
    s.derivs.push_back(score_derivs(kind, game, n, x(n), theta));
    f(n) = s.derivs.back().f;
  }
  double fmax = f.maxCoeff();
  Eigen::VectorXd e = (f.array() - fmax).exp();
  double esum = e.sum();
  s.q = e / esum;
  s.lse = fmax + std::log(esum);
  return s;
}

void check_history(const GameInstance& game, const History& history,
                   ModelKind kind, const Eigen::VectorXd& theta) {
  if (history.size() == 0) {
    throw std::invalid_argument("loss: empty history (step t=1 uses the SSE path)");
  }
  if (theta.size() != param_dim(kind)) {
    throw std::invalid_argument("loss: parameter dimension mismatch");
  }
  for (std::size_t t = 0; t < history.size(); ++t) {
    if (history.strategies[t].size() != game.n_targets ||
        history.attacks[t].size() != game.n_targets) {
      throw std::invalid_argument("loss: history dimension mismatch");
    }
  }
}

}  // namespace

double nll_loss(const GameInstance& game, const History& history,
                ModelKind kind, const Eigen::VectorXd& theta) {
  check_history(game, history, kind, theta);
  double loss = 0.0;
  for (std::size_t t = 0; t < history.size(); ++t) {
    StepScores s = step_scores(game, kind, history.strategies[t], theta);
    const Eigen::VectorXd& z = history.attacks[t];
    for (int n = 0; n < game.n_targets; ++n) {
      loss -= z(n) * (s.derivs[static_cast<std::size_t>(n)].f - s.lse);
    }
  }
  return loss;
}

Eigen::VectorXd loss_grad_theta(const GameInstance& game,
                                const History& history, ModelKind kind,
                                const Eigen::VectorXd& theta) {
  check_history(game, history, kind, theta);
  const int m = param_dim(kind);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(m);
  for (std::size_t t = 0; t < history.size(); ++t) {
    StepScores s = step_scores(game, kind, history.strategies[t], theta);
    const Eigen::VectorXd& z = history.attacks[t];
    double total = z.sum();
    Eigen::VectorXd gbar = Eigen::VectorXd::Zero(m);
    for (int n = 0; n < game.n_targets; ++n) {
      gbar += s.q(n) * s.derivs[static_cast<std::size_t>(n)].df_dtheta;
    }
    for (int n = 0; n < game.n_targets; ++n) {
      grad -= z(n) * s.derivs[static_cast<std::size_t>(n)].df_dtheta;
    }
    grad += total * gbar;
  }
  return grad;
}

LossJacobians loss_jacobian_blocks(const GameInstance& game,
                                   const History& history, ModelKind kind,
                                   const Eigen::VectorXd& theta) {
  check_history(game, history, kind, theta);
  const int m = param_dim(kind);
  const int n_targets = game.n_targets;
  LossJacobians jac;
  jac.wrt_theta.setZero(m, m);
  for (std::size_t t = 0; t < history.size(); ++t) {
    StepScores s = step_scores(game, kind, history.strategies[t], theta);
    const Eigen::VectorXd& z = history.attacks[t];
    double total = z.sum();

    Eigen::VectorXd gbar = Eigen::VectorXd::Zero(m);
    Eigen::MatrixXd qgg = Eigen::MatrixXd::Zero(m, m);   // sum q g g^T
    Eigen::MatrixXd qhess = Eigen::MatrixXd::Zero(m, m); // sum q d2f/dtheta2
    for (int n = 0; n < n_targets; ++n) {
      const ScoreDerivs& d = s.derivs[static_cast<std::size_t>(n)];
      gbar += s.q(n) * d.df_dtheta;
      qgg += s.q(n) * d.df_dtheta * d.df_dtheta.transpose();
      qhess += s.q(n) * d.d2f_dtheta2;
    }

    // d2L/dtheta2
    for (int n = 0; n < n_targets; ++n) {
      jac.wrt_theta -= z(n) * s.derivs[static_cast<std::size_t>(n)].d2f_dtheta2;
    }
    jac.wrt_theta += total * (qhess + qgg - gbar * gbar.transpose());

    // d2L/dtheta dx and d2L/dtheta dz for this step
    Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(m, n_targets);
    Eigen::MatrixXd jz = Eigen::MatrixXd::Zero(m, n_targets);
    for (int n = 0; n < n_targets; ++n) {
      const ScoreDerivs& d = s.derivs[static_cast<std::size_t>(n)];
      Eigen::VectorXd dev = d.df_dtheta - gbar;
      jx.col(n) = -(z(n) * d.d2f_dxdtheta -
                    total * s.q(n) * (d.df_dx * dev + d.d2f_dxdtheta));
      jz.col(n) = -dev;
    }
    jac.wrt_x.push_back(std::move(jx));
    jac.wrt_z.push_back(std::move(jz));
  }
  return jac;
}

void to_json(nlohmann::json& j, const ParamVector& p) {
  j = nlohmann::json{
      {"kind", model_name(p.kind)},
      {"theta", std::vector<double>(p.theta.data(),
                                    p.theta.data() + p.theta.size())}};
}

void from_json(const nlohmann::json& j, ParamVector& p) {
  p.kind = model_from_name(j.at("kind").get<std::string>());
  std::vector<double> v = j.at("theta").get<std::vector<double>>();
  if (static_cast<int>(v.size()) != param_dim(p.kind)) {
    throw std::invalid_argument("ParamVector: theta length mismatch");
  }
  p.theta =
      Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
}

}  // namespace ssgman
