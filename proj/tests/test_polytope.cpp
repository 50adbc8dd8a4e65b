#include <doctest.h>

#include "support.hpp"

#include <defexp/errors.hpp>
#include <defexp/oracle.hpp>
#include <defexp/polytope.hpp>

#include <cmath>
#include <random>

using defexp::BarycentricWeights;
using defexp::MarginalPolytope;
using defexp::Matrix;
using defexp::SeparationCertificate;
using defexp::Vector;
using namespace testsupport;

namespace {

Matrix segment_stats() { return (Matrix(1, 3) << 1.0, 2.0, 3.0).finished(); }

Matrix square_stats() {
  return (Matrix(2, 4) << 0.0, 1.0, 0.0, 1.0,
                          0.0, 0.0, 1.0, 1.0).finished();
}

void check_certificate(const MarginalPolytope& p, const Vector& eta,
                       const SeparationCertificate& cert) {
  CHECK((p.vertices().transpose() * cert.a).maxCoeff() <= cert.a0 + 1e-9);
  CHECK(cert.a.dot(eta) >= cert.a0 + 1.0 - 1e-9);
}

}  // namespace

TEST_CASE("hull construction on the worked shapes") {
  const auto segment = MarginalPolytope::build(segment_stats());
  CHECK(segment.ambient_dimension() == 1);
  CHECK(segment.hull_dimension() == 1);
  CHECK(segment.vertex_count() == 3);

  const auto square = MarginalPolytope::build(square_stats());
  CHECK(square.hull_dimension() == 2);
  CHECK(square.vertex_count() == 4);

  // Constant statistic: a single vertex, hull dimension zero.
  const auto point = MarginalPolytope::build(Matrix::Constant(1, 3, 2.5));
  CHECK(point.vertex_count() == 1);
  CHECK(point.hull_dimension() == 0);

  // Collinear 2-D points reduce to one hull coordinate.
  Matrix collinear(2, 3);
  collinear << 0.0, 1.0, 2.0,
               1.0, 3.0, 5.0;
  const auto line = MarginalPolytope::build(collinear);
  CHECK(line.hull_dimension() == 1);
  // Every vertex survives the reduce/lift round trip.
  for (int v = 0; v < line.vertex_count(); ++v) {
    const Vector vertex = line.vertices().col(v);
    CHECK((line.lift_coordinates(line.reduce_coordinates(vertex)) - vertex)
              .cwiseAbs()
              .maxCoeff() <= 1e-9);
  }
}

TEST_CASE("membership on the segment") {
  const auto segment = MarginalPolytope::build(segment_stats());
  const auto mid = segment.contains(Vector::Constant(1, 2.0));
  REQUIRE(is_member(mid));
  const Vector lambda = std::get<BarycentricWeights>(mid).lambda;
  CHECK(lambda.minCoeff() >= -1e-12);
  CHECK(lambda.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((segment.vertices() * lambda)(0) == doctest::Approx(2.0).epsilon(1e-9));

  const auto vertex = segment.contains(Vector::Constant(1, 3.0));
  REQUIRE(is_member(vertex));

  const auto outside = segment.contains(Vector::Constant(1, 3.5));
  REQUIRE_FALSE(is_member(outside));
  const auto cert = std::get<SeparationCertificate>(outside);
  check_certificate(segment, Vector::Constant(1, 3.5), cert);
  // The hand-solved certificate in the normalized convention.
  CHECK(cert.a[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cert.a0 == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("relative interior on the worked shapes") {
  const auto segment = MarginalPolytope::build(segment_stats());
  const auto inside = segment.relative_interior_contains(Vector::Constant(1, 2.0));
  CHECK(inside.inside);
  CHECK(inside.slack > 1e-9);
  const auto at_vertex = segment.relative_interior_contains(Vector::Constant(1, 3.0));
  CHECK_FALSE(at_vertex.inside);
  CHECK(at_vertex.slack <= 1e-9);
  const auto outside = segment.relative_interior_contains(Vector::Constant(1, 3.5));
  CHECK_FALSE(outside.inside);

  const auto square = MarginalPolytope::build(square_stats());
  const auto centroid = square.relative_interior_contains(Vector::Constant(2, 0.5));
  CHECK(centroid.inside);
  CHECK(std::abs(centroid.slack - derived_value("polytope.interior_slack.square_centroid")) <=
        1e-9);

  // A single-vertex polytope is its own relative interior.
  const auto point = MarginalPolytope::build(Matrix::Constant(1, 3, 2.5));
  CHECK(point.relative_interior_contains(Vector::Constant(1, 2.5)).inside);
  // Vertices of nontrivial hulls are members but never interior points.
  for (int v = 0; v < square.vertex_count(); ++v) {
    const Vector vertex = square.vertices().col(v);
    CHECK(is_member(square.contains(vertex)));
    CHECK_FALSE(square.relative_interior_contains(vertex).inside);
  }
}

TEST_CASE("coordinate reduction round trips and rejects off-hull points") {
  Matrix collinear(2, 3);
  collinear << 0.0, 1.0, 2.0,
               1.0, 3.0, 5.0;
  const auto line = MarginalPolytope::build(collinear);
  const Vector eta = (Vector(2) << 0.5, 2.0).finished();  // on the line y = 2x + 1
  const Vector xi = line.reduce_coordinates(eta);
  CHECK(xi.size() == 1);
  CHECK((line.lift_coordinates(xi) - eta).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((line.reduce_coordinates(line.lift_coordinates(xi)) - xi).cwiseAbs().maxCoeff() <=
        1e-12);

  const Vector off = (Vector(2) << 0.5, 4.0).finished();
  CHECK(line.off_hull_distance(off) > 0.1);
  try {
    (void)line.reduce_coordinates(off);
    FAIL("expected a domain error");
  } catch (const defexp::error& e) {
    CHECK(e.kind() == defexp::errc::domain);
    CHECK(doctest::String(e.what()).size() > 0);
  }
  // Off-hull membership queries separate along the out-of-hull direction.
  const auto cert = line.contains(off);
  REQUIRE_FALSE(is_member(cert));
  check_certificate(line, off, std::get<SeparationCertificate>(cert));
}

TEST_CASE("membership is invariant under permutation and duplication") {
  Matrix stats = square_stats();
  Matrix shuffled(2, 4);
  shuffled << stats.col(3), stats.col(1), stats.col(0), stats.col(2);
  Matrix duplicated(2, 6);
  duplicated << stats, stats.col(0), stats.col(2);
  const Vector query = (Vector(2) << 0.3, 0.6).finished();
  const auto base = MarginalPolytope::build(stats);
  const auto perm = MarginalPolytope::build(shuffled);
  const auto dup = MarginalPolytope::build(duplicated);
  CHECK(dup.vertex_count() == 4);
  CHECK(is_member(base.contains(query)) == is_member(perm.contains(query)));
  CHECK(is_member(base.contains(query)) == is_member(dup.contains(query)));
  const Vector far_out = (Vector(2) << 4.0, -3.0).finished();
  CHECK_FALSE(is_member(base.contains(far_out)));
  CHECK_FALSE(is_member(perm.contains(far_out)));
  CHECK_FALSE(is_member(dup.contains(far_out)));
}

TEST_CASE("random hull points are members; far extrapolations are not") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto square = MarginalPolytope::build(square_stats());
  for (int i = 0; i < 50; ++i) {
    Vector w(4);
    for (int k = 0; k < 4; ++k) w[k] = unit(rng);
    w /= w.sum();
    const Vector eta = square.vertices() * w;
    const auto cert = square.contains(eta);
    REQUIRE(is_member(cert));
    const Vector lambda = std::get<BarycentricWeights>(cert).lambda;
    CHECK((square.vertices() * lambda - eta).cwiseAbs().maxCoeff() <= 1e-8);

    Vector dir(2);
    dir << unit(rng) - 0.5, unit(rng) - 0.5;
    if (dir.norm() < 1e-3) dir << 1.0, 0.0;
    const Vector outside = Vector::Constant(2, 0.5) + dir.normalized() * 5.0;
    const auto sep = square.contains(outside);
    REQUIRE_FALSE(is_member(sep));
    check_certificate(square, outside, std::get<SeparationCertificate>(sep));
  }
}

TEST_CASE("LP membership agrees with the simplex-grid oracle") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;  // 2..4 vertices
    const int m = n <= 3 ? 2 : 2;
    Matrix vertices(m, n);
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < m; ++k) vertices(k, v) = coord(rng);
    }
    const auto polytope = MarginalPolytope::build(vertices);
    Vector eta;
    if (trial % 2 == 0) {
      Vector w(n);
      for (int k = 0; k < n; ++k) w[k] = unit(rng);
      w /= w.sum();
      eta = vertices * w;
    } else {
      Vector centroid = vertices.rowwise().mean();
      Vector dir = vertices.col(trial % n) - centroid;
      if (dir.norm() < 1e-6) dir = Vector::Ones(m);
      eta = centroid + dir.normalized() * 6.0;
    }
    const double step = 1e-3;
    const double tol = 0.75 * n * step * std::max(1.0, vertices.cwiseAbs().maxCoeff());
    const bool lp = is_member(polytope.contains(eta));
    const bool oracle = defexp::oracle::simplex_grid_member(vertices, eta, step, tol);
    CHECK(lp == oracle);
    ++checked;
  }
  CHECK(checked == 60);
}
