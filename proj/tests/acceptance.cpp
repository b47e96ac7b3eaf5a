// Acceptance harness: one pass/fail line per criterion, pinned tolerances.
// Criteria 7 and 8 are trend reports and never affect the exit code; every
// other criterion must pass for the binary to exit 0.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ssgman/behavior.hpp"
#include "ssgman/defender.hpp"
#include "ssgman/fdcheck.hpp"
#include "ssgman/game.hpp"
#include "ssgman/planner.hpp"
#include "ssgman/projection.hpp"
#include "ssgman/rng.hpp"

using namespace ssgman;
using namespace ssgman::testing;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, bool required, const std::string& what) {
  std::printf("[%s] criterion %d: %s%s\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), required ? "" : " (reported, not a build break)");
  if (!pass && required) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double rel_scalar(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Absolute error against the matrix scale floored at 1. Used for
// second-derivative blocks, whose magnitude collapses to ~1e-7 when the
// softmax saturates; entrywise relative FD error is then pure roundoff.
double scaled_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double scale =
      std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

PGDConfig cheap_cfg(std::uint64_t seed) {
  PGDConfig cfg;
  cfg.seed = seed;
  cfg.n_rounds = 1;
  cfg.max_iters = 300;
  return cfg;
}

PGDConfig batch_cfg(std::uint64_t seed) {
  PGDConfig cfg;
  cfg.seed = seed;
  cfg.n_rounds = 2;
  cfg.max_iters = 150;
  cfg.outer_max_iters = 25;
  cfg.n_outer_restarts = 2;
  cfg.max_halvings = 6;
  return cfg;
}

// ---------------------------------------------------------------------------
// Criterion 1: analytic score / loss / utility gradients and the loss
// Jacobian blocks match central finite differences, rel. err <= 1e-5, on
// >= 100 random interior points per model kind.
void criterion_1() {
  const double tol = 1e-5;
  const double h = 1e-5;
  double worst = 0.0;
  int points = 0;
  Rng rng(101);
  for (ModelKind kind : {ModelKind::QR, ModelKind::SUQR, ModelKind::SHARP}) {
    ParamSpace sp = ParamSpace::default_box(kind);
    for (int trial = 0; trial < 100; ++trial) {
      GameInstance g = random_game(4, rng, 2.0);
      Eigen::VectorXd th = interior_theta(sp.box_lo, sp.box_hi, rng);
      Eigen::VectorXd x = interior_coverage(g, rng);
      int n = static_cast<int>(rng.next_u64() % 4);

      ScoreDerivs sd = score_derivs(kind, g, n, x(n), th);
      double fd_fx = (score(kind, g, n, x(n) + h, th) -
                      score(kind, g, n, x(n) - h, th)) / (2 * h);
      worst = std::max(worst, rel_scalar(sd.df_dx, fd_fx));
      Eigen::VectorXd fd_ft = fd_gradient(
          [&](const Eigen::VectorXd& t) { return score(kind, g, n, x(n), t); },
          th, h);
      worst = std::max(worst, max_rel_error(sd.df_dtheta, fd_ft));

      History hist;
      for (int t = 0; t < 2; ++t) {
        Eigen::VectorXd xv = interior_coverage(g, rng);
        Eigen::VectorXd z(4);
        for (int i = 0; i < 4; ++i) z(i) = rng.uniform(0.5, 5.0);
        hist.push(xv, z);
      }
      Eigen::VectorXd lg = loss_grad_theta(g, hist, kind, th);
      Eigen::VectorXd fd_lg = fd_gradient(
          [&](const Eigen::VectorXd& t) { return nll_loss(g, hist, kind, t); },
          th, h);
      worst = std::max(worst, max_rel_error(lg, fd_lg));

      LossJacobians lj = loss_jacobian_blocks(g, hist, kind, th);
      Eigen::MatrixXd fd_jt = fd_jacobian(
          [&](const Eigen::VectorXd& t) {
            return Eigen::VectorXd(loss_grad_theta(g, hist, kind, t));
          }, th, h);
      worst = std::max(worst, scaled_err(lj.wrt_theta, fd_jt));
      Eigen::MatrixXd fd_jx = fd_jacobian(
          [&](const Eigen::VectorXd& xv) {
            History hh = hist;
            hh.strategies[0] = xv;
            return Eigen::VectorXd(loss_grad_theta(g, hh, kind, th));
          }, hist.strategies[0], h);
      worst = std::max(worst, scaled_err(lj.wrt_x[0], fd_jx));
      Eigen::MatrixXd fd_jz = fd_jacobian(
          [&](const Eigen::VectorXd& zv) {
            History hh = hist;
            hh.attacks[1] = zv;
            return Eigen::VectorXd(loss_grad_theta(g, hh, kind, th));
          }, hist.attacks[1], h);
      worst = std::max(worst, scaled_err(lj.wrt_z[1], fd_jz));

      UtilityGrads ug = defender_utility_grad(g, {x}, th, kind);
      Eigen::VectorXd fd_ug = fd_gradient(
          [&](const Eigen::VectorXd& xv) {
            return defender_utility(g, {xv}, th, kind);
          }, x, h);
      worst = std::max(worst, max_rel_error(ug.g, fd_ug));
      ++points;
    }
  }
  report(1, worst <= tol, true,
         "gradient oracles on " + std::to_string(points) +
             " interior points (3 kinds), max rel err " + fmt(worst) +
             " <= 1e-5");
}

// ---------------------------------------------------------------------------
// Criterion 2: dx_t/dtheta_t and dtheta_t/dz_t' vs finite differences of the
// frozen-seed pipeline, rel. err <= 1e-3, on 20 small instances; unstable
// cases (FD h-inconsistent or degenerate projections) excluded and logged.
void criterion_2() {
  const double tol = 1e-3;
  double worst = 0.0;
  int checked = 0, excluded = 0;
  Rng rng(202);

  // Part A: patrol hypergradient dx/dtheta on 10 instances.
  for (int trial = 0; trial < 10; ++trial) {
    GameInstance g = random_game(2 + static_cast<int>(trial % 2), rng, 1.5);
    PGDConfig cfg = cheap_cfg(3000 + static_cast<std::uint64_t>(trial));
    Eigen::VectorXd th = vec({rng.uniform(0.5, 2.5)});
    PatrolOutcome out = patrol_pgd_with_grad(g, {ModelKind::QR, th}, cfg);
    auto run = [&](double h) {
      return fd_jacobian(
          [&](const Eigen::VectorXd& t) {
            return Eigen::VectorXd(
                patrol_pgd_with_grad(g, {ModelKind::QR, t}, cfg).x.x);
          }, th, h);
    };
    Eigen::MatrixXd fd1 = run(1e-4), fd2 = run(5e-5);
    if (max_rel_error(fd1, fd2) > 1e-4) { ++excluded; continue; }
    worst = std::max(worst, max_rel_error(out.dx_dtheta, fd2));
    ++checked;
  }

  // Part B: learning-replay hypergradient dtheta_t/dz_t' on 10 instances
  // (T in {2, 3}, matched QR / SUQR).
  for (int trial = 0; trial < 10; ++trial) {
    int horizon = 2 + trial % 2;
    ModelKind kind = (trial % 2 == 0) ? ModelKind::QR : ModelKind::SUQR;
    GameInstance g = random_game(3, rng, 1.5, 9, horizon);
    PGDConfig cfg = cheap_cfg(4000 + static_cast<std::uint64_t>(trial));
    AttackPlan plan;
    plan.z.resize(horizon, 3);
    for (int t = 0; t < horizon; ++t)
      for (int n = 0; n < 3; ++n) plan.z(t, n) = rng.uniform(0.5, 2.4);
    Trajectory traj = simulate_horizon(g, plan, kind, kind, cfg, true);
    if (traj.degenerate) { ++excluded; continue; }
    // theta_t as a function of z_{t'}: FD through the frozen pipeline.
    bool stable = true;
    double local = 0.0;
    for (int t = 2; t <= horizon && stable; ++t) {
      for (int tp = 1; tp <= t - 1 && stable; ++tp) {
        auto run = [&](double h) {
          return fd_jacobian(
              [&](const Eigen::VectorXd& zrow) {
                AttackPlan p = plan;
                p.z.row(tp - 1) = zrow.transpose();
                return Eigen::VectorXd(
                    simulate_horizon(g, p, kind, kind, cfg, false)
                        .params[t - 2].theta);
              }, Eigen::VectorXd(plan.z.row(tp - 1).transpose()), h);
        };
        Eigen::MatrixXd fd1 = run(1e-4), fd2 = run(5e-5);
        if (max_rel_error(fd1, fd2) > 1e-4) { stable = false; break; }
        local = std::max(
            local, max_rel_error(traj.grads[t - 2].dtheta_dz[tp - 1], fd2));
      }
    }
    if (!stable) { ++excluded; continue; }
    worst = std::max(worst, local);
    ++checked;
  }

  bool pass = (checked >= 12) && (worst <= tol);
  report(2, pass, true,
         "hypergradients on " + std::to_string(checked) +
             " stable instances (" + std::to_string(excluded) +
             " degenerate/unstable excluded), max rel err " + fmt(worst) +
             " <= 1e-3");
}

// ---------------------------------------------------------------------------
// Criterion 3: total plan gradient dF/dz vs finite differences of the full
// frozen-seed simulation, rel. err <= 1e-3, on 10 matched instances.
void criterion_3() {
  const double tol = 1e-3;
  double worst = 0.0;
  int checked = 0, excluded = 0;
  Rng rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    ModelKind kind = (trial % 2 == 0) ? ModelKind::QR : ModelKind::SUQR;
    GameInstance g = random_game(3, rng, 1.5, 9, 2);
    PGDConfig cfg = cheap_cfg(5000 + static_cast<std::uint64_t>(trial));
    AttackPlan plan;
    plan.z.resize(2, 3);
    for (int t = 0; t < 2; ++t)
      for (int n = 0; n < 3; ++n) plan.z(t, n) = rng.uniform(0.5, 2.4);
    Trajectory traj = simulate_horizon(g, plan, kind, kind, cfg, true);
    if (traj.degenerate) { ++excluded; continue; }
    Eigen::MatrixXd an = total_gradient(traj, g, plan);
    Eigen::MatrixXd fd1 = fd_plan_gradient(g, plan, kind, kind, cfg, 1e-4);
    Eigen::MatrixXd fd2 = fd_plan_gradient(g, plan, kind, kind, cfg, 5e-5);
    if (max_rel_error(fd1, fd2) > 1e-4) { ++excluded; continue; }
    worst = std::max(worst, max_rel_error(an, fd2));
    ++checked;
  }
  bool pass = (checked >= 6) && (worst <= tol);
  report(3, pass, true,
         "dF/dz end-to-end on " + std::to_string(checked) + " instances (" +
             std::to_string(excluded) + " excluded), max rel err " +
             fmt(worst) + " <= 1e-3");
}

// ---------------------------------------------------------------------------
// Criterion 4: projections. Closed form vs active-set QP on 1000 rows
// (<= 1e-8); idempotence; nonexpansiveness; Jacobian vs FD (<= 1e-4).
void criterion_4() {
  Rng rng(404);
  double worst_qp = 0.0, worst_idem = 0.0, worst_jac = 0.0;
  bool nonexpansive = true;
  int jac_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 5);
    double cap = rng.uniform(0.5, 4.0);
    Eigen::VectorXd v(n), w(n);
    for (int i = 0; i < n; ++i) {
      v(i) = rng.uniform(-2.0, 3.0);
      w(i) = rng.uniform(-2.0, 3.0);
    }
    Eigen::VectorXd fast = project_capped_simplex(v, cap);
    Eigen::MatrixXd A(n + 1, n);
    A.topRows(n) = -Eigen::MatrixXd::Identity(n, n);
    A.bottomRows(1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b(n) = cap;
    ProjectionResult qp = project_polytope(v, A, b);
    worst_qp = std::max(worst_qp, (fast - qp.point).cwiseAbs().maxCoeff());

    worst_idem = std::max(
        worst_idem,
        (project_capped_simplex(fast, cap) - fast).cwiseAbs().maxCoeff());
    Eigen::VectorXd pw = project_capped_simplex(w, cap);
    if ((fast - pw).norm() > (v - w).norm() + 1e-10) nonexpansive = false;

    // Jacobian check only at stable points: every constraint either clearly
    // inactive (slack > 1e-4) or clearly active (dual > 1e-4); FD straddles
    // the active-set switch otherwise.
    bool stable = !qp.degenerate;
    Eigen::VectorXd slack = b - A * qp.point;
    for (int i = 0; i <= n && stable; ++i) {
      bool clearly_inactive = slack(i) > 1e-4 && qp.duals(i) < 1e-8;
      bool clearly_active = slack(i) < kTolActive && qp.duals(i) > 1e-4;
      stable = clearly_inactive || clearly_active;
    }
    if (trial % 20 == 0 && stable) {
      Eigen::MatrixXd jac = projection_jacobian(qp, A);
      Eigen::MatrixXd fd = fd_jacobian(
          [&](const Eigen::VectorXd& u) {
            return Eigen::VectorXd(project_capped_simplex(u, cap));
          }, v, 1e-6);
      worst_jac = std::max(worst_jac, scaled_err(jac, fd));
      ++jac_checked;
    }
  }
  bool pass = worst_qp <= 1e-8 && worst_idem <= 1e-10 && nonexpansive &&
              worst_jac <= 1e-4 && jac_checked >= 20;
  report(4, pass, true,
         "1000 rows closed-form vs QP (max " + fmt(worst_qp) +
             " <= 1e-8), idempotent (" + fmt(worst_idem) +
             " <= 1e-10), nonexpansive, Jacobian FD on " +
             std::to_string(jac_checked) + " stable points (max " +
             fmt(worst_jac) + " <= 1e-4)");
}

// ---------------------------------------------------------------------------
// Criteria 5-9 share a desk-scale batch: 20 games, N = 8, T = 2, K = 50,
// ratio 0.5, matched QR vs QR, rounded plans re-simulated.
struct BatchRun {
  double att_manip = 0.0, def_manip = 0.0;
  double att_base = 0.0, def_base = 0.0;
  double att_manip_t4 = 0.0;
  double runtime_sec = 0.0;
};

BatchRun run_one(int n_targets, double r, std::uint64_t seed, int horizon,
                 bool also_t4) {
  BatchRun out;
  GameInstance g = generate_covariance_game(n_targets, r, seed, 0.5, 50, horizon);
  PGDConfig cfg = batch_cfg(Rng::derive(77, seed));
  auto t0 = std::chrono::steady_clock::now();
  PlanResult res = optimize_plan(g, ModelKind::QR, ModelKind::QR, cfg,
                                 cfg.n_outer_restarts);
  out.runtime_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  AttackPlan rounded = round_plan(res.plan, g.max_attacks_per_step);
  Trajectory traj =
      simulate_horizon(g, rounded, ModelKind::QR, ModelKind::QR, cfg, false);
  out.att_manip = traj.per_step_att_utility.mean();
  out.def_manip = traj.per_step_def_utility.mean();
  BaselineResult base = nonmanipulative_baseline(g, horizon);
  out.att_base = base.att_per_step;
  out.def_base = base.def_per_step;

  if (also_t4) {
    GameInstance g4 = generate_covariance_game(n_targets, r, seed, 0.5, 50, 4);
    PlanResult res4 = optimize_plan(g4, ModelKind::QR, ModelKind::QR, cfg,
                                    cfg.n_outer_restarts);
    AttackPlan r4 = round_plan(res4.plan, g4.max_attacks_per_step);
    Trajectory t4 =
        simulate_horizon(g4, r4, ModelKind::QR, ModelKind::QR, cfg, false);
    out.att_manip_t4 = t4.per_step_att_utility.mean();
  }
  return out;
}

// One-sided paired t statistic for mean(d) > 0.
double paired_t(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) return mean > 0 ? 1e9 : (mean < 0 ? -1e9 : 0.0);
  return mean / (sd / std::sqrt(static_cast<double>(n)));
}

void criteria_5_to_8() {
  const int n_games = 20;
  const double t_crit = 1.729;  // one-sided 95%, df = 19
  const double r_values[5] = {0.0, -0.25, -0.5, -0.75, -1.0};
  std::vector<BatchRun> runs;
  for (int i = 0; i < n_games; ++i) {
    runs.push_back(run_one(8, r_values[i % 5],
                           900 + static_cast<std::uint64_t>(i), 2, i < 10));
  }

  std::vector<double> att_gap, def_gap, dilution;
  double att_m = 0, att_b = 0, def_m = 0, def_b = 0;
  for (const BatchRun& r : runs) {
    att_gap.push_back(r.att_manip - r.att_base);
    def_gap.push_back(r.def_base - r.def_manip);  // positive = defender loses
    att_m += r.att_manip / n_games;
    att_b += r.att_base / n_games;
    def_m += r.def_manip / n_games;
    def_b += r.def_base / n_games;
  }
  double t5 = paired_t(att_gap);
  report(5, t5 > t_crit, true,
         "attacker gain: mean per-step utility " + fmt(att_m) +
             " (manipulative) vs " + fmt(att_b) + " (baseline), paired t = " +
             fmt(t5) + " > 1.729");
  double t6 = paired_t(def_gap);
  report(6, t6 > t_crit, true,
         "defender loss: mean per-step utility " + fmt(def_m) +
             " (manipulative) vs " + fmt(def_b) + " (baseline), paired t = " +
             fmt(t6) + " > 1.729");

  double t2_mean = 0, t4_mean = 0;
  for (int i = 0; i < 10; ++i) {
    t2_mean += runs[i].att_manip / 10.0;
    t4_mean += runs[i].att_manip_t4 / 10.0;
  }
  report(7, t4_mean <= t2_mean + 1e-9, false,
         "horizon dilution: mean per-step attacker utility " + fmt(t4_mean) +
             " at T=4 vs " + fmt(t2_mean) + " at T=2");

  // Criterion 8: planner wall-clock vs N, linear fit R^2 >= 0.8.
  std::vector<double> xs, ys;
  for (int n : {4, 8, 12}) {
    double mean_rt = 0.0;
    for (int i = 0; i < 3; ++i) {
      BatchRun r = run_one(n, -0.5, 700 + static_cast<std::uint64_t>(i), 2,
                           false);
      mean_rt += r.runtime_sec / 3.0;
    }
    xs.push_back(n);
    ys.push_back(mean_rt);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(xs.size());
  for (int i = 0; i < m; ++i) {
    sx += xs[i]; sy += ys[i]; sxx += xs[i] * xs[i]; sxy += xs[i] * ys[i];
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double icept = (sy - slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < m; ++i) {
    double e = ys[i] - (icept + slope * xs[i]);
    ss_res += e * e;
    ss_tot += (ys[i] - sy / m) * (ys[i] - sy / m);
  }
  double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  report(8, r2 >= 0.8, false,
         "runtime vs targets (N in {4,8,12}): slope " + fmt(slope) +
             " s/target, R^2 = " + fmt(r2) + " >= 0.8");
}

// ---------------------------------------------------------------------------
// Criterion 9: baseline identities.
void criterion_9() {
  bool pass = true;
  std::string detail;

  // (a) Zero-sum games: attacker per-step = -defender per-step exactly.
  for (std::uint64_t s : {11u, 12u, 13u, 14u, 15u}) {
    GameInstance g = generate_covariance_game(6, -1.0, s, 0.5, 20, 3);
    BaselineResult base = nonmanipulative_baseline(g, 3);
    if (std::abs(base.att_per_step + base.def_per_step) > 1e-9) {
      pass = false;
      detail += " zero-sum identity violated;";
    }
  }

  // (b) T=1 planner is myopic: full budget on maximizing targets, value
  // K * max_n U^a_n at the equilibrium coverage (ties allowed inside the
  // attack set, where the equilibrium equalizes attacker utilities).
  {
    GameInstance g = make_game(vec({6.0, 5.0, 4.0}), vec({-1.0, -1.0, -1.0}),
                               vec({3.0, 6.0, 2.0}), vec({-2.0, -4.0, -1.0}),
                               0.5, 7, 1);
    PGDConfig cfg = cheap_cfg(9);
    cfg.outer_max_iters = 60;
    PlanResult res = optimize_plan(g, ModelKind::QR, ModelKind::QR, cfg, 2);
    SseSolution sse = solve_sse(g);
    double v = -1e18;
    for (int n = 0; n < 3; ++n)
      v = std::max(v, att_utility_at(g, n, sse.x.x(n)));
    if (std::abs(res.plan.z.row(0).sum() - 7.0) > 1e-3 ||
        std::abs(res.utility - 7.0 * v) > 1e-3 * std::abs(7.0 * v)) {
      pass = false;
      detail += " T=1 myopic identity violated;";
    }
    for (int n = 0; n < 3; ++n) {
      if (res.plan.z(0, n) > 1e-3 &&
          std::abs(att_utility_at(g, n, sse.x.x(n)) - v) > 1e-6) {
        pass = false;
        detail += " T=1 support suboptimal;";
      }
    }
  }

  // (c) SHARP with gamma = delta pinned to 1 reproduces SUQR end-to-end on
  // identical seeds: same learned parameters, loss, and patrol strategy.
  {
    Rng rng(606);
    GameInstance g = random_game(4, rng, 2.0);
    Eigen::VectorXd th_star = vec({-6.0, 0.8, -0.7});
    History hist;
    for (int t = 0; t < 3; ++t) {
      Eigen::VectorXd x = interior_coverage(g, rng);
      Eigen::VectorXd q = attack_distribution(ModelKind::SUQR, g, {x}, th_star);
      hist.push(x, 40.0 * q);
    }
    ParamSpace sp_suqr = ParamSpace::default_box(ModelKind::SUQR);
    Eigen::VectorXd lo(5), hi(5);
    lo.head(3) = sp_suqr.box_lo; hi.head(3) = sp_suqr.box_hi;
    lo(3) = lo(4) = hi(3) = hi(4) = 1.0;  // pin gamma = delta = 1
    ParamSpace sp_sharp = ParamSpace::from_box(lo, hi);
    PGDConfig cfg = cheap_cfg(42);
    LearnResult suqr = learn_theta(g, hist, ModelKind::SUQR, sp_suqr, cfg);
    LearnResult sharp = learn_theta(g, hist, ModelKind::SHARP, sp_sharp, cfg);
    double dtheta =
        (suqr.theta.theta - sharp.theta.theta.head(3)).cwiseAbs().maxCoeff();
    double dloss = std::abs(suqr.loss - sharp.loss);
    PatrolOutcome px = patrol_pgd_with_grad(g, suqr.theta, cfg);
    PatrolOutcome py = patrol_pgd_with_grad(g, sharp.theta, cfg);
    double dx = (px.x.x - py.x.x).cwiseAbs().maxCoeff();
    if (dtheta > 1e-6 || dloss > 1e-8 || dx > 1e-6) {
      pass = false;
      detail += " SHARP(1,1) != SUQR (dtheta " + fmt(dtheta) + ", dx " +
                fmt(dx) + ");";
    }
  }

  report(9, pass, true,
         "baseline identities: zero-sum att = -def (<= 1e-9), T=1 myopic "
         "value K*maxU^a (<= 1e-3 rel), SHARP(1,1) = SUQR (<= 1e-6)" + detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_to_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("acceptance: %d required criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("acceptance: all required criteria passed\n");
  return 0;
}
