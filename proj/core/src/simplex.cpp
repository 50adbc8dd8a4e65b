#include "detail/simplex.hpp"

#include "defexp/errors.hpp"

#include <cmath>
#include <vector>

namespace defexp::detail {
namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

class Tableau {
 public:
  // T = [A | I | b] with the artificial identity as the starting basis.
  Tableau(const MatrixXd& A, const VectorXd& b, double tol)
      : tol_(tol), n_(static_cast<int>(A.cols())) {
    const int k = static_cast<int>(A.rows());
    T_.resize(k, n_ + k + 1);
    T_ << A, MatrixXd::Identity(k, k), b;
    basis_.resize(k);
    for (int i = 0; i < k; ++i) basis_[i] = n_ + i;
  }

  int rows() const { return static_cast<int>(T_.rows()); }
  int real_cols() const { return n_; }
  int total_cols() const { return static_cast<int>(T_.cols()) - 1; }
  double rhs(int i) const { return T_(i, T_.cols() - 1); }
  int basis(int i) const { return basis_[i]; }
  bool is_artificial(int col) const { return col >= n_; }

  void pivot(int r, int e) {
    T_.row(r) /= T_(r, e);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double factor = T_(i, e);
      if (factor != 0.0) T_.row(i) -= factor * T_.row(r);
    }
    basis_[r] = e;
  }

  // Reduced-cost row for the cost vector (indexed over all columns).
  RowVectorXd reduced_costs(const VectorXd& cost) const {
    RowVectorXd z = RowVectorXd::Zero(T_.cols());
    for (int j = 0; j < static_cast<int>(T_.cols()); ++j) {
      double cb_dot = 0.0;
      for (int i = 0; i < rows(); ++i) cb_dot += cost[basis_[i]] * T_(i, j);
      z[j] = (j < total_cols() ? cost[j] : 0.0) - cb_dot;
    }
    return z;
  }

  // Bland's rule loop. `allowed` masks columns that may enter. Returns false
  // on unboundedness.
  bool run(const VectorXd& cost, const std::vector<bool>& allowed, int& iterations) {
    RowVectorXd z = reduced_costs(cost);
    const int cap = 2000 + 200 * total_cols() * rows();
    while (true) {
      int entering = -1;
      for (int j = 0; j < total_cols(); ++j) {
        if (allowed[j] && z[j] < -tol_) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < rows(); ++i) {
        if (T_(i, entering) > tol_) {
          // Clamp tiny negative rhs from roundoff to the degenerate ratio 0.
          const double ratio = std::max(rhs(i), 0.0) / T_(i, entering);
          if (leaving < 0 || ratio < best_ratio - tol_ ||
              (std::abs(ratio - best_ratio) <= tol_ && basis_[i] < basis_[leaving])) {
            leaving = i;
            best_ratio = ratio;
          }
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
      z -= z[entering] * T_.row(leaving);
      if (++iterations > cap) {
        fail(errc::numerical, "simplex iteration cap exceeded");
      }
    }
  }

  void drop_row(int r) {
    const int k = rows();
    MatrixXd next(k - 1, T_.cols());
    next.topRows(r) = T_.topRows(r);
    next.bottomRows(k - 1 - r) = T_.bottomRows(k - 1 - r);
    T_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  double entry(int i, int j) const { return T_(i, j); }

 private:
  double tol_;
  int n_;
  MatrixXd T_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_equality_lp(MatrixXd A, VectorXd b, const VectorXd& c, double pivot_tol,
                             double feas_tol) {
  const int k = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpSolution out;

  VectorXd row_sign = VectorXd::Ones(k);
  for (int i = 0; i < k; ++i) {
    if (b[i] < 0.0) {
      A.row(i) *= -1.0;
      b[i] *= -1.0;
      row_sign[i] = -1.0;
    }
  }

  Tableau tab(A, b, pivot_tol);

  // Phase 1: minimize the sum of artificials.
  VectorXd phase1_cost = VectorXd::Zero(n + k);
  phase1_cost.tail(k).setOnes();
  std::vector<bool> allowed(n + k, true);
  if (!tab.run(phase1_cost, allowed, out.iterations)) {
    fail(errc::numerical, "phase-1 simplex reported unbounded");
  }

  double infeasibility = 0.0;
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.is_artificial(tab.basis(i))) infeasibility += tab.rhs(i);
  }
  if (infeasibility > std::max(feas_tol, pivot_tol * 10.0)) {
    out.status = LpStatus::infeasible;
    out.objective = infeasibility;
    // y_i = 1 - (phase-1 reduced cost of artificial i); undo the row flips.
    const RowVectorXd z1 = tab.reduced_costs(phase1_cost);
    out.farkas.resize(k);
    for (int i = 0; i < k; ++i) out.farkas[i] = row_sign[i] * (1.0 - z1[n + i]);
    return out;
  }

  // Drive artificials out of the basis; all-zero rows are redundant.
  for (int i = tab.rows() - 1; i >= 0; --i) {
    if (!tab.is_artificial(tab.basis(i))) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.entry(i, j)) > pivot_tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
    } else {
      tab.drop_row(i);
    }
  }

  // Phase 2 on the real columns only.
  VectorXd cost = VectorXd::Zero(n + k);
  cost.head(n) = c;
  for (int j = n; j < n + k; ++j) allowed[j] = false;
  if (!tab.run(cost, allowed, out.iterations)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.x = VectorXd::Zero(n);
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.basis(i) < n) out.x[tab.basis(i)] = tab.rhs(i);
  }
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace defexp::detail
