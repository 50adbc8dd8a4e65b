#include <doctest.h>

#include "support.hpp"

#include <defexp/errors.hpp>
#include <defexp/sample_space.hpp>

#include <cmath>

using defexp::Density;
using defexp::SampleSpace;
using defexp::Vector;
using namespace testsupport;

namespace {

SampleSpace three_point() { return SampleSpace({"x1", "x2", "x3"}, Vector::Ones(3)); }

}  // namespace

TEST_CASE("construction validates weights, labels, and cardinality") {
  CHECK_THROWS_AS(SampleSpace({"a"}, Vector::Ones(1)), defexp::error);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, Vector::Ones(3)), defexp::error);
  CHECK_THROWS_AS(SampleSpace({"a", "a"}, Vector::Ones(2)), defexp::error);
  try {
    SampleSpace({"a", "b"}, (Vector(2) << 0.5, -0.5).finished());
    FAIL("expected a validation error");
  } catch (const defexp::error& e) {
    CHECK(e.kind() == defexp::errc::validation);
    CHECK(e.path() == "mu[1]");
  }
}

TEST_CASE("expectation on the worked examples") {
  SampleSpace uniform({"a", "b"}, Vector::Constant(2, 0.5));
  const Density p = uniform.density(Vector::Ones(2));
  CHECK(uniform.expectation(p, (Vector(2) << -1.0, 1.0).finished()) == doctest::Approx(0.0));
  CHECK(uniform.expectation(p, (Vector(2) << 0.0, 2.0).finished()) == doctest::Approx(1.0));

  const auto space = three_point();
  const Density q = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  const Vector u = (Vector(3) << 1.0, 2.0, 3.0).finished();
  CHECK(space.expectation(q, u) ==
        doctest::Approx(derived_value("space.expectation.three_point")).epsilon(1e-14));
  CHECK_THROWS_AS(space.expectation(q, Vector::Ones(2)), defexp::error);
}

TEST_CASE("centering and covariance") {
  const auto space = three_point();
  const Density p = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  const Vector u = (Vector(3) << 1.0, 2.0, 3.0).finished();

  const Vector constant = Vector::Constant(3, 4.2);
  CHECK(space.center(p, constant).cwiseAbs().maxCoeff() <= 1e-15);

  const Vector centered = space.center(p, u);
  const Vector expected = derived_vector("space.center.three_point");
  CHECK((centered - expected).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(std::abs(space.expectation(p, centered)) <= 1e-14);
  // Idempotence.
  CHECK((space.center(p, centered) - centered).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK(space.covariance(p, u, u) ==
        doctest::Approx(derived_value("space.covariance.three_point")).epsilon(1e-14));
  CHECK(space.covariance(p, u, constant) == doctest::Approx(0.0));
  CHECK(space.covariance(p, u, u) >= 0.0);
}

TEST_CASE("expectation is linear and covariance bilinear") {
  const auto space = three_point();
  const Density p = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  RandomFamilies rand(11);
  for (int i = 0; i < 20; ++i) {
    const Vector u = rand.direction(3), v = rand.direction(3);
    const double a = 1.7, b = -0.4;
    CHECK(space.expectation(p, a * u + b * v) ==
          doctest::Approx(a * space.expectation(p, u) + b * space.expectation(p, v))
              .epsilon(1e-12));
    CHECK(space.covariance(p, u, v) == doctest::Approx(space.covariance(p, v, u)));
    CHECK(space.covariance(p, a * u, v) ==
          doctest::Approx(a * space.covariance(p, u, v)).epsilon(1e-12));
  }
}

TEST_CASE("is_density accepts exactly mu-normalized nonnegative vectors") {
  const auto space = three_point();
  CHECK(space.is_density((Vector(3) << 0.2, 0.3, 0.5).finished()));
  CHECK(space.is_density((Vector(3) << 0.0, 0.5, 0.5).finished()));
  CHECK_FALSE(space.is_density((Vector(3) << -0.1, 0.6, 0.5).finished()));
  CHECK_FALSE(space.is_density((Vector(3) << 0.2, 0.3, 0.501).finished()));
  CHECK_FALSE(space.is_density(Vector::Ones(2)));
  CHECK_THROWS_AS(space.density((Vector(3) << 0.2, 0.3, 0.6).finished()), defexp::error);
  const Density uniform = space.uniform_density();
  CHECK(space.is_density(uniform.values));
}

TEST_CASE("projection onto a span with the worked coefficient") {
  const auto space = three_point();
  const Density p = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  const Vector u = (Vector(3) << 1.0, 2.0, 3.0).finished();
  const Vector b = space.center(p, u);
  const Vector target = (Vector(3) << 1.0, 0.0, 0.0).finished();

  const Vector projection = space.project_onto_span(p, {b}, target);
  const Vector expected = derived_vector("space.projection.three_point");
  CHECK((projection - expected).cwiseAbs().maxCoeff() <=
        derived_tolerance("space.projection.three_point"));
  // The coefficient is E_p[t b]/E_p[b b].
  const double coeff = space.expectation(p, target.cwiseProduct(b)) / space.covariance(p, u, u);
  CHECK(coeff == doctest::Approx(-0.26 / 0.61).epsilon(1e-12));

  // Target in the span projects to itself; orthogonal target to zero.
  CHECK((space.project_onto_span(p, {b}, 2.5 * b) - 2.5 * b).cwiseAbs().maxCoeff() <= 1e-12);
  Vector orth = target;
  orth = orth - space.project_onto_span(p, {b}, target);
  orth = space.center(p, orth);
  CHECK(space.project_onto_span(p, {b}, orth).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projection handles rank-deficient bases and validates centering") {
  const auto space = three_point();
  const Density p = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  const Vector u = (Vector(3) << 1.0, 2.0, 3.0).finished();
  const Vector b = space.center(p, u);
  const Vector target = (Vector(3) << 1.0, 0.0, 0.0).finished();
  // Duplicated basis vector: same projection through the pseudo-inverse.
  const Vector with_dup = space.project_onto_span(p, {b, b}, target);
  const Vector single = space.project_onto_span(p, {b}, target);
  CHECK((with_dup - single).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(space.project_onto_span(p, {u}, target), defexp::error);
}

TEST_CASE("projection is idempotent and self-adjoint on random vectors") {
  const auto space = three_point();
  const Density p = space.density((Vector(3) << 0.2, 0.3, 0.5).finished());
  RandomFamilies rand(17);
  const Vector b1 = space.center(p, rand.direction(3));
  const Vector b2 = space.center(p, rand.direction(3));
  for (int i = 0; i < 20; ++i) {
    const Vector t = rand.direction(3);
    const Vector once = space.project_onto_span(p, {b1, b2}, t);
    const Vector twice = space.project_onto_span(p, {b1, b2}, once);
    CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-10);
    // Residual is E_p-orthogonal to the basis.
    const Vector residual = t - once;
    CHECK(std::abs(space.expectation(p, residual.cwiseProduct(b1))) <= 1e-10);
    CHECK(std::abs(space.expectation(p, residual.cwiseProduct(b2))) <= 1e-10);
    // Self-adjointness: E_p[P(s) t] = E_p[s P(t)].
    const Vector s = rand.direction(3);
    const Vector ps = space.project_onto_span(p, {b1, b2}, s);
    const double lhs = space.expectation(p, ps.cwiseProduct(t));
    const double rhs = space.expectation(p, s.cwiseProduct(once));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}
