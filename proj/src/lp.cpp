#include "ssgman/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ssgman {

namespace {

constexpr double kTol = 1e-9;

// Canonical minimization tableau. basis[i] is the variable occupying row i;
// basis columns are kept as identity by the pivot updates.
struct Tableau {
  Eigen::MatrixXd t;        // m x (ncols + 1), last column is the RHS
  Eigen::RowVectorXd red;   // reduced costs, ncols + 1 (last = -objective)
  std::vector<int> basis;
};

void pivot(Tableau& tab, int row, int col) {
  tab.t.row(row) /= tab.t(row, col);
  for (int i = 0; i < tab.t.rows(); ++i) {
    if (i != row && std::abs(tab.t(i, col)) > 0.0) {
      tab.t.row(i) -= tab.t(i, col) * tab.t.row(row);
    }
  }
  tab.red -= tab.red(col) * tab.t.row(row);
  tab.basis[static_cast<std::size_t>(row)] = col;
}

// Bland's rule simplex on a canonical tableau. Returns false on unbounded.
bool run_simplex(Tableau& tab, int ncols) {
  const int m = static_cast<int>(tab.t.rows());
  const int rhs = ncols;
  for (int iter = 0; iter < 10000; ++iter) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab.red(j) < -kTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;  // optimal
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (tab.t(i, enter) > kTol) {
        double ratio = tab.t(i, rhs) / tab.t(i, enter);
        if (ratio < best_ratio - kTol ||
            (ratio < best_ratio + kTol &&
             (leave < 0 || tab.basis[static_cast<std::size_t>(i)] <
                               tab.basis[static_cast<std::size_t>(leave)]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    pivot(tab, leave, enter);
  }
  return true;
}

void recompute_reduced_costs(Tableau& tab, const Eigen::VectorXd& cost,
                             int ncols) {
  tab.red.setZero(ncols + 1);
  for (int j = 0; j <= ncols; ++j) {
    double v = (j < ncols) ? cost(j) : 0.0;
    for (int i = 0; i < tab.t.rows(); ++i) {
      v -= cost(tab.basis[static_cast<std::size_t>(i)]) * tab.t(i, j);
    }
    tab.red(j) = v;
  }
}

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                  const Eigen::VectorXd& h) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(G.rows());
  // Variables: u (n), w (n), slack (m), artificial (m); x = u - w.
  const int n_art0 = 2 * n + m;
  const int ncols0 = 2 * n + 2 * m;

  Tableau tab;
  tab.t.setZero(m, ncols0 + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double sign = (h(i) >= 0.0) ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
      tab.t(i, j) = sign * G(i, j);
      tab.t(i, n + j) = -sign * G(i, j);
    }
    tab.t(i, 2 * n + i) = sign;         // slack of the original <= row
    tab.t(i, n_art0 + i) = 1.0;         // artificial
    tab.t(i, ncols0) = sign * h(i);
    tab.basis[static_cast<std::size_t>(i)] = n_art0 + i;
  }

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(ncols0);
  cost1.segment(n_art0, m).setOnes();
  recompute_reduced_costs(tab, cost1, ncols0);
  run_simplex(tab, ncols0);

  LpResult res;
  if (-tab.red(ncols0) > 1e-7) {
    res.status = LpStatus::Infeasible;
    return res;
  }

  // Drive remaining (zero-valued) artificials out of the basis; a row whose
  // non-artificial entries are all zero is redundant and gets dropped.
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(tab.t.rows()); ++i) {
    int bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < n_art0) {
      keep.push_back(i);
      continue;
    }
    int col = -1;
    for (int j = 0; j < n_art0; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-7) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      pivot(tab, i, col);
      keep.push_back(i);
    }
  }
  if (static_cast<int>(keep.size()) < static_cast<int>(tab.t.rows())) {
    Eigen::MatrixXd t2(static_cast<int>(keep.size()), tab.t.cols());
    std::vector<int> basis2;
    for (int k = 0; k < static_cast<int>(keep.size()); ++k) {
      t2.row(k) = tab.t.row(keep[static_cast<std::size_t>(k)]);
      basis2.push_back(tab.basis[static_cast<std::size_t>(keep[static_cast<std::size_t>(k)])]);
    }
    tab.t = t2;
    tab.basis = basis2;
  }

  // Phase 2 over the columns without artificials.
  const int ncols = n_art0;
  Eigen::MatrixXd t3(tab.t.rows(), ncols + 1);
  t3.leftCols(ncols) = tab.t.leftCols(ncols);
  t3.col(ncols) = tab.t.col(ncols0);
  tab.t = t3;

  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(ncols);
  cost2.head(n) = c;
  cost2.segment(n, n) = -c;
  recompute_reduced_costs(tab, cost2, ncols);
  if (!run_simplex(tab, ncols)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < static_cast<int>(tab.t.rows()); ++i) {
    y(tab.basis[static_cast<std::size_t>(i)]) = tab.t(i, ncols);
  }
  res.status = LpStatus::Optimal;
  res.x = y.head(n) - y.segment(n, n);
  res.objective = c.dot(res.x);
  return res;
}

InteriorPoint find_interior_point(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  // Variables (x, s): maximize s subject to A x + ||A_i|| s <= b, s <= 1.
  Eigen::MatrixXd G(m + 1, n + 1);
  Eigen::VectorXd h(m + 1);
  G.setZero();
  for (int i = 0; i < m; ++i) {
    G.row(i).head(n) = A.row(i);
    G(i, n) = std::max(A.row(i).norm(), 1e-12);
    h(i) = b(i);
  }
  G(m, n) = 1.0;
  h(m) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c(n) = -1.0;
  LpResult lp = solve_lp(c, G, h);
  InteriorPoint ip;
  if (lp.status != LpStatus::Optimal) return ip;
  ip.x = lp.x.head(n);
  ip.margin = lp.x(n);
  ip.feasible = ip.margin >= -1e-9;
  return ip;
}

}  // namespace ssgman
