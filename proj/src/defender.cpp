#include "ssgman/defender.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssgman/lp.hpp"
#include "ssgman/rng.hpp"

namespace ssgman {

void PGDConfig::validate() const {
  if (patrol_alpha <= 0.0 || learn_alpha <= 0.0 || outer_alpha <= 0.0) {
    throw std::invalid_argument("PGDConfig: step sizes must be positive");
  }
  if (n_rounds <= 0 || max_iters < 0 || outer_max_iters <= 0 ||
      n_outer_restarts <= 0) {
    throw std::invalid_argument("PGDConfig: counts must be positive");
  }
  if (utility_tol < 0.0 || loss_tol < 0.0) {
    throw std::invalid_argument("PGDConfig: tolerances must be >= 0");
  }
}

double defender_utility(const GameInstance& game, const CoverageStrategy& x,
                        const Eigen::VectorXd& theta, ModelKind kind) {
  Eigen::VectorXd q = attack_distribution(kind, game, x, theta);
  double u = 0.0;
  for (int n = 0; n < game.n_targets; ++n) {
    u += q(n) * def_utility_at(game, n, x.x(n));
  }
  return u;
}

UtilityGrads defender_utility_grad(const GameInstance& game,
                                   const CoverageStrategy& x,
                                   const Eigen::VectorXd& theta,
                                   ModelKind kind) {
  const int n_targets = game.n_targets;
  const int m = param_dim(kind);
  std::vector<ScoreDerivs> sd;
  sd.reserve(static_cast<std::size_t>(n_targets));
  Eigen::VectorXd f(n_targets), u(n_targets), du(n_targets);
  for (int n = 0; n < n_targets; ++n) {
    sd.push_back(score_derivs(kind, game, n, x.x(n), theta));
    f(n) = sd.back().f;
    u(n) = def_utility_at(game, n, x.x(n));
    du(n) = game.def_reward(n) - game.def_penalty(n);
  }
  Eigen::VectorXd e = (f.array() - f.maxCoeff()).exp();
  Eigen::VectorXd q = e / e.sum();
  const double ubar = q.dot(u);

  Eigen::VectorXd gbar = Eigen::VectorXd::Zero(m);   // sum q df/dtheta
  Eigen::VectorXd ubar_theta = Eigen::VectorXd::Zero(m);  // dUbar/dtheta
  for (int n = 0; n < n_targets; ++n) {
    gbar += q(n) * sd[static_cast<std::size_t>(n)].df_dtheta;
  }
  for (int n = 0; n < n_targets; ++n) {
    ubar_theta +=
        q(n) * u(n) * (sd[static_cast<std::size_t>(n)].df_dtheta - gbar);
  }

  UtilityGrads out;
  out.g.resize(n_targets);
  for (int k = 0; k < n_targets; ++k) {
    out.g(k) = q(k) * (sd[static_cast<std::size_t>(k)].df_dx * (u(k) - ubar) +
                       du(k));
  }
  out.j_x.setZero(n_targets, n_targets);
  out.j_theta.setZero(n_targets, m);
  for (int k = 0; k < n_targets; ++k) {
    const ScoreDerivs& dk = sd[static_cast<std::size_t>(k)];
    const double inner = dk.df_dx * (u(k) - ubar) + du(k);
    for (int l = 0; l < n_targets; ++l) {
      const double dq = q(k) * ((k == l ? 1.0 : 0.0) - q(l)) *
                        sd[static_cast<std::size_t>(l)].df_dx;
      double val = dq * inner - q(k) * dk.df_dx * out.g(l);
      if (k == l) {
        val += q(k) * (dk.d2f_dx2 * (u(k) - ubar) + dk.df_dx * du(k));
      }
      out.j_x(k, l) = val;
    }
    Eigen::VectorXd dev = dk.df_dtheta - gbar;
    out.j_theta.row(k) =
        (q(k) * inner) * dev.transpose() +
        q(k) * ((u(k) - ubar) * dk.d2f_dxdtheta.transpose() -
                dk.df_dx * ubar_theta.transpose());
  }
  return out;
}

PatrolOutcome patrol_pgd_with_grad(const GameInstance& game,
                                   const ParamVector& theta,
                                   const PGDConfig& cfg,
                                   std::uint64_t seed_salt) {
  cfg.validate();
  const int n_targets = game.n_targets;
  const int m = param_dim(theta.kind);
  const StrategyPolytope& space = game.strategy_space;

  PatrolOutcome best;
  double best_u = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (int round = 0; round < cfg.n_rounds; ++round) {
    Rng rng(Rng::derive(cfg.seed, 0x9a7101u, seed_salt,
                        static_cast<std::uint64_t>(round)));
    Eigen::VectorXd x0(n_targets);
    for (int n = 0; n < n_targets; ++n) x0(n) = rng.uniform();
    Eigen::VectorXd x = project_polytope(x0, space).point;
    Eigen::MatrixXd dx_dtheta = Eigen::MatrixXd::Zero(n_targets, m);
    double u_prev = defender_utility(game, {x}, theta.theta, theta.kind);

    for (int i = 0; i < cfg.max_iters; ++i) {
      UtilityGrads gr = defender_utility_grad(game, {x}, theta.theta, theta.kind);
      Eigen::VectorXd x_raw = x + cfg.patrol_alpha * gr.g;
      ProjectionResult pr = project_polytope(x_raw, space);
      Eigen::MatrixXd dx_raw =
          cfg.patrol_alpha * gr.j_theta +
          (cfg.patrol_alpha * gr.j_x +
           Eigen::MatrixXd::Identity(n_targets, n_targets)) *
              dx_dtheta;
      dx_dtheta = projection_jacobian(pr, space.A) * dx_raw;
      x = pr.point;
      double u_new = defender_utility(game, {x}, theta.theta, theta.kind);
      double delta = u_new - u_prev;
      u_prev = u_new;
      if (delta <= cfg.utility_tol) break;
    }
    if (!std::isfinite(u_prev)) continue;
    any_finite = true;
    if (u_prev > best_u) {  // ties -> first-found restart
      best_u = u_prev;
      best.x.x = x;
      best.utility = u_prev;
      best.dx_dtheta = dx_dtheta;
    }
  }
  if (!any_finite) throw std::runtime_error("patrol_pgd_with_grad: all restarts diverged");
  best.solver = PatrolSolver::PGD;
  return best;
}

namespace {

// Strictly feasible start for the barrier method; BudgetBox has a closed
// form, general polytopes go through the interior-point LP.
Eigen::VectorXd strict_interior_start(const StrategyPolytope& space, Rng& rng) {
  const int n = space.dim();
  if (space.form == PolytopeForm::BudgetBox) {
    double level = std::min(0.98, 0.9 * space.budget / n);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = level * rng.uniform(0.2, 1.0);
    return x;
  }
  InteriorPoint ip = find_interior_point(space.A, space.b);
  if (!ip.feasible || ip.margin <= 1e-9) {
    throw std::runtime_error("patrol_alt: polytope has empty interior");
  }
  Eigen::VectorXd x = ip.x;
  // Jitter inside the slack ball for multi-start diversity.
  for (int i = 0; i < n; ++i) x(i) += 0.2 * ip.margin * rng.uniform(-1.0, 1.0);
  if (!space.contains(x, -1e-10)) x = ip.x;
  return x;
}

}  // namespace

PatrolOutcome patrol_alt(const GameInstance& game, const ParamVector& theta,
                         const PGDConfig& cfg, std::uint64_t seed_salt) {
  cfg.validate();
  const int n_targets = game.n_targets;
  const StrategyPolytope& space = game.strategy_space;
  const Eigen::MatrixXd& A = space.A;
  const Eigen::VectorXd& b = space.b;
  const int rows = static_cast<int>(A.rows());

  // Degenerate budget: the polytope is the single point x = 0.
  if (space.form == PolytopeForm::BudgetBox && space.budget <= 1e-12) {
    PatrolOutcome out;
    out.x.x = Eigen::VectorXd::Zero(n_targets);
    out.utility = defender_utility(game, out.x, theta.theta, theta.kind);
    out.dx_dtheta = Eigen::MatrixXd::Zero(n_targets, param_dim(theta.kind));
    out.solver = PatrolSolver::InteriorAlt;
    return out;
  }

  auto barrier_value = [&](const Eigen::VectorXd& x, double mu) {
    Eigen::VectorXd slack = b - A * x;
    if ((slack.array() <= 0.0).any()) {
      return -std::numeric_limits<double>::infinity();
    }
    return defender_utility(game, {x}, theta.theta, theta.kind) +
           mu * slack.array().log().sum();
  };

  PatrolOutcome best;
  double best_u = -std::numeric_limits<double>::infinity();
  bool any_finite = false;
  for (int round = 0; round < cfg.n_rounds; ++round) {
    Rng rng(Rng::derive(cfg.seed, 0xa17u, seed_salt,
                        static_cast<std::uint64_t>(round)));
    Eigen::VectorXd x = strict_interior_start(space, rng);
    double mu = 1.0;
    for (int outer = 0; outer < 10; ++outer) {
      for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd slack = b - A * x;
        UtilityGrads gr =
            defender_utility_grad(game, {x}, theta.theta, theta.kind);
        Eigen::VectorXd grad = gr.g;
        Eigen::MatrixXd hess = gr.j_x;
        for (int j = 0; j < rows; ++j) {
          // d/dx of mu * ln(b_j - A_j x) is -mu A_j^T / slack_j
          grad -= mu / slack(j) * A.row(j).transpose();
          hess -= mu / (slack(j) * slack(j)) * A.row(j).transpose() * A.row(j);
        }
        if (grad.norm() < 1e-9) break;
        // Damped Newton on the concavified objective.
        Eigen::VectorXd step;
        double reg = 0.0;
        for (int tries = 0; tries < 8; ++tries) {
          Eigen::MatrixXd hneg =
              -(hess -
                reg * Eigen::MatrixXd::Identity(n_targets, n_targets));
          Eigen::LLT<Eigen::MatrixXd> llt(hneg);
          if (llt.info() == Eigen::Success) {
            step = llt.solve(grad);
            break;
          }
          reg = (reg == 0.0) ? 1e-6 : reg * 100.0;
          step = grad;  // gradient fallback
        }
        double f0 = barrier_value(x, mu);
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
          Eigen::VectorXd xn = x + t * step;
          double fn = barrier_value(xn, mu);
          if (std::isfinite(fn) && fn > f0 + 1e-12 * t) {
            x = xn;
            moved = true;
            break;
          }
          t *= 0.5;
        }
        if (!moved) break;
      }
      mu *= 0.2;
    }
    double u = defender_utility(game, {x}, theta.theta, theta.kind);
    if (!std::isfinite(u)) continue;
    any_finite = true;
    if (u > best_u) {
      best_u = u;
      best.x.x = x;
      best.utility = u;
    }
  }
  if (!any_finite) throw std::runtime_error("patrol_alt: all restarts diverged");
  best.dx_dtheta = Eigen::MatrixXd::Zero(n_targets, param_dim(theta.kind));
  best.solver = PatrolSolver::InteriorAlt;
  return best;
}

LearnResult learn_theta(const GameInstance& game, const History& history,
                        ModelKind kind, const ParamSpace& space,
                        const PGDConfig& cfg, std::uint64_t seed_salt,
                        const Eigen::VectorXd* warm_start_point) {
  cfg.validate();
  if (history.size() == 0) {
    throw std::invalid_argument("learn_theta: empty history");
  }
  const int m = param_dim(kind);
  if (space.dim() != m) throw std::invalid_argument("learn_theta: space dim");

  LearnResult best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int round = 0; round < cfg.n_rounds; ++round) {
    Rng rng(Rng::derive(cfg.seed, 0x1ea52u, seed_salt,
                        static_cast<std::uint64_t>(round)));
    Eigen::VectorXd theta0(m);
    for (int j = 0; j < m; ++j) {
      theta0(j) = rng.uniform(space.box_lo(j), space.box_hi(j));
    }
    if (cfg.warm_start && round == 0 && warm_start_point != nullptr) {
      theta0 = *warm_start_point;
    }
    Eigen::VectorXd theta = project_polytope(theta0, space.C, space.D).point;
    double loss_prev = nll_loss(game, history, kind, theta);
    std::vector<LearnIterate> trace;
    bool degenerate = false;

    for (int i = 0; i < cfg.max_iters; ++i) {
      Eigen::VectorXd h = loss_grad_theta(game, history, kind, theta);
      // The loss scales with the attack counts, so a fixed step can overshoot
      // badly; backtrack from learn_alpha until the projected step improves.
      double alpha = cfg.learn_alpha;
      ProjectionResult pr;
      double loss_new = loss_prev;
      bool improved = false;
      for (int halving = 0; halving < 40; ++halving) {
        pr = project_polytope(theta - alpha * h, space.C, space.D);
        loss_new = nll_loss(game, history, kind, pr.point);
        if (std::isfinite(loss_new) && loss_new < loss_prev) {
          improved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!improved) break;
      degenerate = degenerate || pr.degenerate;
      trace.push_back({theta, pr, alpha});
      theta = pr.point;
      double decrease = loss_prev - loss_new;
      loss_prev = loss_new;
      if (decrease <= cfg.loss_tol) break;
    }
    if (!std::isfinite(loss_prev)) continue;
    if (loss_prev < best_loss) {
      best_loss = loss_prev;
      best.theta = {kind, theta};
      best.loss = loss_prev;
      best.trace = std::move(trace);
      best.restart_index = round;
      best.any_degenerate_projection = degenerate;
    }
  }
  if (!std::isfinite(best_loss)) {
    throw std::runtime_error("learn_theta: all restarts diverged");
  }
  return best;
}

}  // namespace ssgman
