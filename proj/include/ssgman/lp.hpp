#pragma once

#include <Eigen/Dense>

namespace ssgman {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

// Minimize c'x subject to G x <= h, x free. Dense two-phase simplex with
// Bland's rule; intended for the small LPs arising in the SSE multiple-LP
// method and interior-point initialization (tens of variables at most).
LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                  const Eigen::VectorXd& h);

// Finds a maximally-slack feasible point of {x : A x <= b} by maximizing the
// minimum row-normalized slack (Chebyshev-style). Returns the point and the
// attained slack margin; margin > 0 means the interior is nonempty.
struct InteriorPoint {
  bool feasible = false;
  Eigen::VectorXd x;
  double margin = 0.0;
};
InteriorPoint find_interior_point(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b);

}  // namespace ssgman
