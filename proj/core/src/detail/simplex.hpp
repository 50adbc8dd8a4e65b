#pragma once

#include <Eigen/Dense>

namespace defexp::detail {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  Eigen::VectorXd x;       // primal solution when optimal
  double objective = 0.0;  // c.x when optimal, phase-1 infeasibility otherwise
  // Farkas certificate for the infeasible case: y with y.A_j <= 0 for every
  // column j and y.b > 0 (in the caller's original row signs).
  Eigen::VectorXd farkas;
  int iterations = 0;
};

// minimize c.x subject to A x = b, x >= 0, by dense two-phase tableau simplex
// with Bland's anti-cycling rule. Redundant rows discovered in phase 1 are
// dropped. Intended for the small systems of the polytope queries; feas_tol
// is the phase-1 objective threshold separating feasible from infeasible.
LpSolution solve_equality_lp(Eigen::MatrixXd A, Eigen::VectorXd b, const Eigen::VectorXd& c,
                             double pivot_tol = 1e-11, double feas_tol = 1e-9);

}  // namespace defexp::detail
