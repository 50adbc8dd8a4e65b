#include <doctest.h>

#include "support.hpp"

#include <defexp/oracle.hpp>

#include <cmath>

using defexp::Deformation;
using defexp::Matrix;
using defexp::Vector;
using namespace defexp::oracle;
using namespace testsupport;

TEST_CASE("quadrature deformed logarithm") {
  const auto classical = Deformation::classical();
  CHECK(quad_ln_phi(classical, 1.0) == 0.0);
  CHECK(std::abs(quad_ln_phi(classical, std::exp(1.0)) - 1.0) <= 1e-10);
  const auto kan = Deformation::kaniadakis(0.5);
  CHECK(std::abs(quad_ln_phi(kan, 4.0) - 1.5) <= 1e-10);
  CHECK(std::abs(quad_ln_phi(kan, 0.25) + 1.5) <= 1e-10);
  CHECK(std::abs(invert_ln_phi(kan, 1.5) - 4.0) <= 1e-9);
}

TEST_CASE("finite differences") {
  auto quadratic = [](const Vector& x) {
    return 3.0 * x[0] * x[0] + 2.0 * x[0] * x[1] - x[1] * x[1] + 5.0 * x[0];
  };
  const Vector at = (Vector(2) << 0.7, -0.3).finished();
  const Vector grad = fd_gradient(quadratic, at, 1e-5);
  CHECK(grad[0] == doctest::Approx(6.0 * at[0] + 2.0 * at[1] + 5.0).epsilon(1e-9));
  CHECK(grad[1] == doctest::Approx(2.0 * at[0] - 2.0 * at[1]).epsilon(1e-9));
  const Matrix hess = fd_hessian(quadratic, at, 1e-3);
  CHECK(hess(0, 0) == doctest::Approx(6.0).epsilon(1e-7));
  CHECK(hess(0, 1) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(hess(1, 1) == doctest::Approx(-2.0).epsilon(1e-7));

  auto constant = [](const Vector&) { return 4.2; };
  CHECK(fd_gradient(constant, at, 1e-5).cwiseAbs().maxCoeff() <= 1e-10);

  // Against the analytic gradient of the classical two-point normalization.
  const auto fam = two_point_family(Deformation::classical());
  auto alpha_fn = [&](const Vector& theta) { return fam.alpha(theta); };
  const Vector theta = Vector::Constant(1, 2.0);
  const Vector fd = fd_gradient(alpha_fn, theta, 1e-5);
  CHECK(std::abs(fd[0] - fam.grad_alpha(theta)[0]) <= 1e-6);
}

TEST_CASE("grid supremum") {
  auto concave = [](const Vector& x) {
    return -(x[0] - 0.731) * (x[0] - 0.731) - 2.0 * (x[1] + 0.25) * (x[1] + 0.25) + 1.5;
  };
  const auto res = grid_sup(concave, Vector::Constant(2, -3.0), Vector::Constant(2, 3.0), 0.25);
  CHECK(std::abs(res.value - 1.5) <= 1e-6);
  CHECK(std::abs(res.argmax[0] - 0.731) <= 1e-3);

  auto monotone = [](const Vector& x) { return x[0]; };
  const auto corner =
      grid_sup(monotone, Vector::Constant(1, -1.0), Vector::Constant(1, 2.0), 0.1);
  CHECK(corner.value == doctest::Approx(2.0).epsilon(1e-12));

  // Classical Legendre value through the supremum.
  const auto fam = two_point_family(Deformation::classical());
  const double eta = std::exp(2.0) / (1.0 + std::exp(2.0));
  auto objective = [&](const Vector& theta) { return theta[0] * eta - fam.alpha(theta); };
  const auto legendre =
      grid_sup(objective, Vector::Constant(1, -8.0), Vector::Constant(1, 8.0), 0.05);
  const double closed = 2.0 * eta - std::log((1.0 + std::exp(2.0)) / 2.0);
  CHECK(std::abs(legendre.value - closed) <= 1e-6);
}

TEST_CASE("simplex grid membership") {
  Matrix segment(1, 3);
  segment << 1.0, 2.0, 3.0;
  CHECK(simplex_grid_member(segment, Vector::Constant(1, 2.0), 1e-3, 5e-3));
  CHECK_FALSE(simplex_grid_member(segment, Vector::Constant(1, 3.5), 1e-3, 5e-3));
  Matrix square(2, 4);
  square << 0.0, 1.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 1.0;
  CHECK(simplex_grid_member(square, Vector::Constant(2, 0.5), 1e-2, 2e-2));
  CHECK_FALSE(simplex_grid_member(square, (Vector(2) << 1.4, 0.2).finished(), 1e-2, 2e-2));
  // A random hull sample is a member by construction.
  RandomFamilies rand(97);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector w(4);
  for (int k = 0; k < 4; ++k) w[k] = unit(rand.rng);
  w /= w.sum();
  CHECK(simplex_grid_member(square, square * w, 1e-2, 2e-2));
}

TEST_CASE("fixture generation is deterministic and matches the committed file") {
  const std::string once = derived_values_json();
  const std::string twice = derived_values_json();
  CHECK(once == twice);
  const std::string committed = read_file(fixtures_dir() + "/derived_values.json");
  CHECK(once == committed);
}
