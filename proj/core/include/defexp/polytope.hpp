#pragma once

#include "defexp/sample_space.hpp"

#include <variant>
#include <vector>

namespace defexp {

// Affine functional with a.H(x) <= a0 for every point and a.eta = a0 + 1 at
// the separated query, so theta_n = n*a drives the normalization unbounded.
struct SeparationCertificate {
  Vector a;
  double a0 = 0.0;
};

// Convex weights over the deduplicated vertex list reproducing the query.
struct BarycentricWeights {
  Vector lambda;
};

using MembershipCertificate = std::variant<BarycentricWeights, SeparationCertificate>;

inline bool is_member(const MembershipCertificate& c) {
  return std::holds_alternative<BarycentricWeights>(c);
}

struct InteriorResult {
  bool inside = false;
  // Optimal value of max t s.t. lambda_x >= t; strictly positive exactly on
  // the relative interior.
  double slack = 0.0;
};

// Convex hull of the statistic images {H(x)}, with an affine-hull
// factorization so rank-deficient statistics reduce to full-dimensional
// queries. Membership and interior tests run a dense two-phase simplex with
// Bland's rule; infeasibility converts into a separation certificate.
class MarginalPolytope {
 public:
  // statistics is m x n; column x is the vertex H(x). Duplicate columns are
  // removed (absolute tolerance dedup_tol, first occurrence wins).
  static MarginalPolytope build(const Matrix& statistics, double lp_tol = 1e-9,
                                double dedup_tol = 1e-12);

  int ambient_dimension() const noexcept { return static_cast<int>(vertices_.rows()); }
  int hull_dimension() const noexcept { return static_cast<int>(basis_.cols()); }
  int vertex_count() const noexcept { return static_cast<int>(vertices_.cols()); }
  const Matrix& vertices() const noexcept { return vertices_; }
  // Original point index -> deduplicated vertex index.
  const std::vector<int>& vertex_of_point() const noexcept { return vertex_of_point_; }
  const Vector& base_point() const noexcept { return base_; }
  // Orthonormal columns spanning the affine hull directions.
  const Matrix& hull_basis() const noexcept { return basis_; }
  double lp_tol() const noexcept { return lp_tol_; }

  double off_hull_distance(const Vector& eta) const;
  // Coordinates in the affine hull; throws a domain error (reporting the
  // off-hull distance) when eta does not lie on the hull.
  Vector reduce_coordinates(const Vector& eta) const;
  Vector lift_coordinates(const Vector& xi) const;

  MembershipCertificate contains(const Vector& eta) const;
  InteriorResult relative_interior_contains(const Vector& eta) const;

 private:
  MarginalPolytope() = default;

  Matrix vertices_;       // m x n_unique
  Matrix reduced_;        // d x n_unique
  Vector base_;           // first vertex
  Matrix basis_;          // m x d
  std::vector<int> vertex_of_point_;
  double lp_tol_ = 1e-9;
};

}  // namespace defexp
