#include "ssgman/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ssgman/lp.hpp"

namespace ssgman {

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double cap) {
  if (cap <= 0.0) {
    if (cap < 0.0) throw std::invalid_argument("project_capped_simplex: cap < 0");
    return Eigen::VectorXd::Zero(v.size());
  }
  Eigen::VectorXd z = v.cwiseMax(0.0);
  if (z.sum() <= cap) return z;
  // Cap binds: project onto the simplex {z >= 0, sum z = cap}.
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end(), std::greater<double>());
  double cum = 0.0;
  double tau = 0.0;
  for (int k = 0; k < static_cast<int>(s.size()); ++k) {
    cum += s[static_cast<std::size_t>(k)];
    double t = (cum - cap) / (k + 1);
    if (k + 1 == static_cast<int>(s.size()) ||
        s[static_cast<std::size_t>(k + 1)] <= t) {
      tau = t;
      break;
    }
  }
  return (v.array() - tau).cwiseMax(0.0);
}

ProjectionResult project_polytope(const Eigen::VectorXd& v,
                                  const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  if (v.size() != n) throw std::invalid_argument("project_polytope: dim mismatch");

  // Primal active-set method on min 1/2 ||x - v||^2 s.t. Ax <= b: keep x
  // feasible throughout, move toward v inside the null space of the working
  // rows, block at the first constraint hit (so the working set always holds
  // with equality at x and can never become inconsistent).
  Eigen::VectorXd x;
  // The early exit uses a much tighter tolerance than the active-set loop:
  // accepting v that is kTolFeas outside would leak that slack to callers
  // (e.g. box projections of gradient steps must clamp exactly).
  if (m == 0 || ((A * v - b).array() <= 1e-13).all()) {
    x = v;
  } else {
    InteriorPoint ip = find_interior_point(A, b);
    if (!ip.feasible) {
      throw std::invalid_argument("project_polytope: empty polytope");
    }
    x = ip.x;
  }

  std::vector<int> work;  // rows held at equality
  Eigen::VectorXd lam;    // duals on the working set
  const int max_iter = 100 * std::max(m, 1);
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    const int k = static_cast<int>(work.size());
    Eigen::MatrixXd Awt(n, k);
    for (int i = 0; i < k; ++i) {
      Awt.col(i) = A.row(work[static_cast<std::size_t>(i)]).transpose();
    }
    Eigen::VectorXd d = v - x;
    Eigen::VectorXd p = d;
    if (k > 0) {
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Awt);
      const int rank = static_cast<int>(qr.rank());
      if (rank > 0) {
        Eigen::MatrixXd q =
            qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
        p = d - q * (q.transpose() * d);
      }
    }

    if (p.norm() <= 1e-12) {
      // Stationary within the working set; check dual signs.
      lam = k > 0 ? Eigen::VectorXd(
                        Awt.completeOrthogonalDecomposition().solve(d))
                  : Eigen::VectorXd();
      int drop = -1;
      double most_neg = -1e-10;
      for (int i = 0; i < k; ++i) {
        if (lam(i) < most_neg) {
          most_neg = lam(i);
          drop = i;
        }
      }
      if (drop < 0) {
        converged = true;
        break;
      }
      work.erase(work.begin() + drop);
      continue;
    }

    // Ratio test: longest feasible step along p, capped at the full step.
    double alpha = 1.0;
    int block = -1;
    for (int j = 0; j < m; ++j) {
      if (std::find(work.begin(), work.end(), j) != work.end()) continue;
      double ap = A.row(j).dot(p);
      if (ap <= 1e-12) continue;
      double step = (b(j) - A.row(j).dot(x)) / ap;
      if (step < alpha) {
        alpha = std::max(step, 0.0);
        block = j;
      }
    }
    x += alpha * p;
    if (block >= 0) work.push_back(block);
  }
  if (!converged) {
    double resid = (A * x - b).maxCoeff();
    throw std::runtime_error(
        "project_polytope: active-set loop did not converge, max residual " +
        std::to_string(resid));
  }

  ProjectionResult res;
  res.point = x;
  res.duals = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < static_cast<int>(work.size()); ++i) {
    res.duals(work[static_cast<std::size_t>(i)]) = std::max(0.0, lam(i));
  }
  res.active_mask.resize(static_cast<std::size_t>(m));
  Eigen::VectorXd slack = b - A * x;
  for (int j = 0; j < m; ++j) {
    bool active = std::abs(slack(j)) <= kTolActive;
    res.active_mask[static_cast<std::size_t>(j)] = active;
    if (active && res.duals(j) <= kTolActive) res.degenerate = true;
  }
  return res;
}

namespace {

// BudgetBox closed form: x(tau) = clip(v - tau, 0, 1) with tau >= 0 chosen by
// bisection so the budget row holds; duals follow from per-coordinate
// stationarity x - v + eta_up - eta_lo + tau = 0.
ProjectionResult project_budget_box(const Eigen::VectorXd& v,
                                    const StrategyPolytope& space) {
  const int n = static_cast<int>(v.size());
  const double budget = space.budget;
  double tau = 0.0;
  Eigen::VectorXd x = v.cwiseMax(0.0).cwiseMin(1.0);
  if (x.sum() > budget + 1e-15) {
    double lo = 0.0, hi = v.maxCoeff();
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      double mid = 0.5 * (lo + hi);
      double s = (v.array() - mid).cwiseMax(0.0).cwiseMin(1.0).sum();
      (s > budget ? lo : hi) = mid;
    }
    tau = 0.5 * (lo + hi);
    x = (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0);
  }

  ProjectionResult res;
  res.point = x;
  res.duals = Eigen::VectorXd::Zero(2 * n + 1);
  res.active_mask.assign(static_cast<std::size_t>(2 * n + 1), false);
  for (int i = 0; i < n; ++i) {
    if (x(i) >= 1.0 - kTolActive) {
      res.active_mask[static_cast<std::size_t>(i)] = true;
      res.duals(i) = std::max(0.0, v(i) - tau - 1.0);
    }
    if (x(i) <= kTolActive) {
      res.active_mask[static_cast<std::size_t>(n + i)] = true;
      res.duals(n + i) = std::max(0.0, tau - v(i));
    }
  }
  if (x.sum() >= budget - kTolActive) {
    res.active_mask[static_cast<std::size_t>(2 * n)] = true;
    res.duals(2 * n) = tau;
  }
  for (int j = 0; j < 2 * n + 1; ++j) {
    if (res.active_mask[static_cast<std::size_t>(j)] &&
        res.duals(j) <= kTolActive) {
      res.degenerate = true;
    }
  }
  return res;
}

}  // namespace

ProjectionResult project_polytope(const Eigen::VectorXd& v,
                                  const StrategyPolytope& space) {
  if (space.form == PolytopeForm::BudgetBox) {
    return project_budget_box(v, space);
  }
  return project_polytope(v, space.A, space.b);
}

Eigen::MatrixXd projection_jacobian(const ProjectionResult& result,
                                    const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.cols());
  std::vector<int> strict;
  for (int j = 0; j < static_cast<int>(A.rows()); ++j) {
    // Weakly active rows (dual ~ 0) are treated as inactive: this matches the
    // directional derivative from the feasible side.
    if (result.active_mask[static_cast<std::size_t>(j)] &&
        result.duals(j) > kTolActive) {
      strict.push_back(j);
    }
  }
  if (strict.empty()) return Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd At(n, static_cast<int>(strict.size()));
  for (int i = 0; i < static_cast<int>(strict.size()); ++i) {
    At.col(i) = A.row(strict[static_cast<std::size_t>(i)]).transpose();
  }
  // Rank-revealing orthonormal basis of the active row space; the null-space
  // projector I - Q Q^T stays well-defined when active rows are dependent.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
  const int rank = static_cast<int>(qr.rank());
  if (rank == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  return Eigen::MatrixXd::Identity(n, n) - q * q.transpose();
}

}  // namespace ssgman
