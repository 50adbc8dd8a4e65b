#pragma once

#include "defexp/deformation.hpp"
#include "defexp/sample_space.hpp"

#include <cstdint>
#include <functional>
#include <string>

// Brute-force oracles used by the test suite to adjudicate the library's
// closed forms and solvers. They deliberately share no code with the paths
// they check: quadrature, inversion, and differentiation are reimplemented
// here from first principles, one order of magnitude looser and slower.
namespace defexp::oracle {

struct OracleConfig {
  double fd_step = 1e-5;          // gradient checks
  double fd_hessian_step = 1e-3;  // second differences need a wider step
  double quad_abs_tol = 1e-12;
  std::uint64_t seed = 20250810;
};

// Integral of 1/phi from 1 to v by adaptive Simpson, independent of the
// deformation's own ln_phi path.
double quad_ln_phi(const Deformation& d, double v, double abs_tol = 1e-12);

// Inverse of quad_ln_phi by bisection on a multiplicatively expanded bracket.
double invert_ln_phi(const Deformation& d, double u, double abs_tol = 1e-12);

// Normalization constant by pure bisection on the residual, using the
// caller-supplied exponential so the oracle can stay independent.
double bisect_alpha(const std::function<double(double)>& exp_fn, const Vector& statistic_values,
                    const Vector& p, const Vector& mu, double theta, double bracket_eps = 1e-14);

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);
Matrix fd_hessian(const std::function<double(const Vector&)>& f, const Vector& x, double h);
double fd_derivative(const std::function<double(double)>& f, double x, double h);
double fd_second_derivative(const std::function<double(double)>& f, double x, double h);

struct GridSupResult {
  double value = 0.0;
  Vector argmax;
};

// Coarse grid search over the box followed by refine_rounds rounds of 10x
// local refinement around the incumbent.
GridSupResult grid_sup(const std::function<double(const Vector&)>& g, const Vector& lo,
                       const Vector& hi, double coarse_step, int refine_rounds = 3);

// Exhaustive lambda-grid membership for small vertex sets (n <= 4). Subtrees
// whose reachable box cannot meet the tolerance are pruned, which leaves the
// accept/reject answer identical to the full scan.
bool simplex_grid_member(const Matrix& vertices, const Vector& eta, double step, double tol);

// Canonical JSON text of every oracle-computed example value consumed by the
// test suite (the fixtures/derived_values.json file).
std::string derived_values_json();

}  // namespace defexp::oracle
