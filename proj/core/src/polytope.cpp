#include "defexp/polytope.hpp"

#include "defexp/errors.hpp"
#include "detail/simplex.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace defexp {

namespace {

// Normalize a strictly separating direction to the a.eta = a0 + 1 convention,
// so theta_n = n * a can be consumed directly by the divergence witness.
SeparationCertificate normalize_certificate(const Vector& direction, const Matrix& vertices,
                                            const Vector& eta) {
  Vector gaps = vertices.transpose() * direction;
  const double worst = gaps.maxCoeff();
  const double margin = direction.dot(eta) - worst;
  if (!(margin > 0.0)) {
    fail(errc::numerical, "separation direction does not strictly separate the query");
  }
  SeparationCertificate cert;
  cert.a = direction / margin;
  cert.a0 = (vertices.transpose() * cert.a).maxCoeff();
  return cert;
}

}  // namespace

MarginalPolytope MarginalPolytope::build(const Matrix& statistics, double lp_tol,
                                         double dedup_tol) {
  if (statistics.rows() < 1 || statistics.cols() < 1) {
    fail(errc::validation, "polytope needs at least one statistic and one point", "statistics");
  }
  MarginalPolytope p;
  p.lp_tol_ = lp_tol;

  // Deduplicate columns; ties keep the first occurrence.
  const int n = static_cast<int>(statistics.cols());
  p.vertex_of_point_.assign(n, -1);
  std::vector<int> keep;
  for (int x = 0; x < n; ++x) {
    int found = -1;
    for (std::size_t v = 0; v < keep.size(); ++v) {
      if ((statistics.col(x) - statistics.col(keep[v])).cwiseAbs().maxCoeff() <= dedup_tol) {
        found = static_cast<int>(v);
        break;
      }
    }
    if (found < 0) {
      keep.push_back(x);
      found = static_cast<int>(keep.size()) - 1;
    }
    p.vertex_of_point_[x] = found;
  }
  p.vertices_.resize(statistics.rows(), static_cast<int>(keep.size()));
  for (std::size_t v = 0; v < keep.size(); ++v) p.vertices_.col(v) = statistics.col(keep[v]);

  // Affine hull through the first vertex; rank by relative singular-value
  // threshold.
  p.base_ = p.vertices_.col(0);
  Matrix diffs = p.vertices_.colwise() - p.base_;
  Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeThinU);
  int d = 0;
  if (svd.singularValues().size() > 0) {
    const double threshold = 1e-10 * svd.singularValues()[0];
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()[i] > threshold && svd.singularValues()[i] > 0.0) ++d;
    }
  }
  p.basis_ = svd.matrixU().leftCols(d);
  p.reduced_ = p.basis_.transpose() * diffs;
  return p;
}

double MarginalPolytope::off_hull_distance(const Vector& eta) const {
  if (eta.size() != vertices_.rows()) {
    fail(errc::validation, "query dimension mismatch", "eta");
  }
  const Vector r = eta - base_;
  return (r - basis_ * (basis_.transpose() * r)).norm();
}

Vector MarginalPolytope::reduce_coordinates(const Vector& eta) const {
  const double off = off_hull_distance(eta);
  if (off > lp_tol_) {
    fail(errc::domain,
         "query lies off the affine hull (distance " + std::to_string(off) + ")");
  }
  return basis_.transpose() * (eta - base_);
}

Vector MarginalPolytope::lift_coordinates(const Vector& xi) const {
  if (xi.size() != basis_.cols()) {
    fail(errc::validation, "reduced coordinate dimension mismatch", "xi");
  }
  return base_ + basis_ * xi;
}

MembershipCertificate MarginalPolytope::contains(const Vector& eta) const {
  if (eta.size() != vertices_.rows()) {
    fail(errc::validation, "query dimension mismatch", "eta");
  }
  // Off-hull queries separate along the out-of-hull component without an LP.
  const Vector r = eta - base_;
  const Vector r_perp = r - basis_ * (basis_.transpose() * r);
  if (r_perp.norm() > lp_tol_) {
    return normalize_certificate(r_perp.normalized(), vertices_, eta);
  }

  const int nv = vertex_count();
  const int d = hull_dimension();
  const Vector xi = basis_.transpose() * r;

  // Feasibility LP: lambda >= 0, sum lambda = 1, reduced vertices combine to xi.
  Matrix A(d + 1, nv);
  A.topRows(d) = reduced_;
  A.bottomRows(1).setOnes();
  Vector b(d + 1);
  b.head(d) = xi;
  b[d] = 1.0;
  auto lp = detail::solve_equality_lp(A, b, Vector::Zero(nv), 1e-11, lp_tol_);
  if (lp.status == detail::LpStatus::optimal) {
    return BarycentricWeights{lp.x};
  }
  if (lp.status != detail::LpStatus::infeasible) {
    fail(errc::numerical, "membership LP returned an unexpected status");
  }
  // Farkas row multipliers (g, g0) satisfy g.xi_v + g0 <= 0 at every vertex
  // and g.xi + g0 > 0; lift g through the hull basis.
  const Vector g = lp.farkas.head(d);
  return normalize_certificate(basis_ * g, vertices_, eta);
}

InteriorResult MarginalPolytope::relative_interior_contains(const Vector& eta) const {
  if (eta.size() != vertices_.rows()) {
    fail(errc::validation, "query dimension mismatch", "eta");
  }
  const Vector r = eta - base_;
  if ((r - basis_ * (basis_.transpose() * r)).norm() > lp_tol_) {
    return InteriorResult{false, 0.0};
  }
  const int nv = vertex_count();
  const int d = hull_dimension();
  const Vector xi = basis_.transpose() * r;

  // max t  s.t.  sum lambda = 1, reduced combination = xi, lambda_v - t - s_v = 0.
  // Columns: lambda (nv), t, s (nv).
  const int cols = 2 * nv + 1;
  Matrix A = Matrix::Zero(d + 1 + nv, cols);
  Vector b = Vector::Zero(d + 1 + nv);
  A.block(0, 0, d, nv) = reduced_;
  b.head(d) = xi;
  A.block(d, 0, 1, nv).setOnes();
  b[d] = 1.0;
  for (int v = 0; v < nv; ++v) {
    A(d + 1 + v, v) = 1.0;
    A(d + 1 + v, nv) = -1.0;
    A(d + 1 + v, nv + 1 + v) = -1.0;
  }
  Vector c = Vector::Zero(cols);
  c[nv] = -1.0;
  auto lp = detail::solve_equality_lp(A, b, c, 1e-11, lp_tol_);
  if (lp.status == detail::LpStatus::infeasible) {
    return InteriorResult{false, 0.0};
  }
  if (lp.status != detail::LpStatus::optimal) {
    fail(errc::numerical, "interior LP returned an unexpected status");
  }
  const double slack = lp.x[nv];
  return InteriorResult{slack > lp_tol_, slack};
}

}  // namespace defexp
