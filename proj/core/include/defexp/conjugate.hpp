#pragma once

#include "defexp/family.hpp"
#include "defexp/polytope.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace defexp {

enum class ConjugateStatus {
  attained_interior,  // maximizer found; value exact up to the Newton tolerance
  finite_boundary,    // supremum finite but not attained; value is a lower bound
  infinite_outside,   // query outside the marginal polytope
};

const char* conjugate_status_name(ConjugateStatus s) noexcept;

struct ConjugateOptions {
  double newton_tol = 1e-9;   // gradient-norm stopping rule on the interior
  int max_iter = 100;
  int boundary_max_iter = 300;
  double lp_tol = 1e-9;
  // Divergence witness along the separating ray: evaluate g(n*a) until it
  // exceeds witness_bound or the step budget runs out.
  double witness_bound = 1e3;
  int witness_max_steps = 5000;
};

struct ConjugateDiagnostics {
  int iterations = 0;
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  // Statistics were linearly dependent; the maximizer is the minimum-norm lift.
  bool reduced_coordinates = false;
  // Boundary case: monotone sequence of attained objective values.
  std::vector<double> lower_bounds;
  // Outside case: g(theta_n) along theta_n = n * a.
  std::vector<double> witness;
};

struct ConjugateResult {
  ConjugateStatus status = ConjugateStatus::attained_interior;
  double value = 0.0;  // +infinity when infinite_outside
  std::optional<Vector> maximizer;
  std::optional<SeparationCertificate> certificate;
  ConjugateDiagnostics diagnostics;

  bool finite() const noexcept { return status != ConjugateStatus::infinite_outside; }
};

// alpha*(eta) = sup_theta { theta.eta - alpha(theta) }. Queries are classified
// through the marginal polytope: separated points report the certificate and
// the divergent witness sequence; relative-interior points run damped Newton
// on the concave objective from theta = 0; boundary points report a monotone
// lower-bound estimate without claiming attainment.
ConjugateResult alpha_star(const PhiExponentialFamily& fam, const Vector& eta,
                           const ConjugateOptions& opts = {});

struct LegendreReport {
  Vector eta;
  Vector theta_hat;
  double alpha_theta = 0.0;
  double conjugate_value = 0.0;
  double theta_residual = 0.0;  // max-norm against the requested theta (full rank)
  double value_residual = 0.0;  // |alpha*(eta) - (theta.eta - alpha(theta))|
  bool reduced_coordinates = false;
  bool ok = false;
};

// Round-trips theta -> eta = grad_alpha(theta) -> alpha_star(eta) and checks
// the Legendre identity.
LegendreReport legendre_check(const PhiExponentialFamily& fam, const Vector& theta,
                              const ConjugateOptions& opts = {});

struct HvResult {
  ConjugateResult conjugate;
  Vector eta;                     // eta_j = E_p[(u* + 1) H_j]
  bool density_predicate = false; // (u* + 1) p is a density
};

// Conjugate of K over V in the duality (u*, u) -> E_p[u* u]; requires a
// centered u*.
HvResult h_v(const PhiExponentialFamily& fam, const Vector& u_star,
             const ConjugateOptions& opts = {});

struct HFullResult {
  HvResult hv;
  std::optional<Vector> u_hat;
  // max |escort(u_hat) - (u* + 1) p| over the points, when attained.
  double stationarity_residual = std::numeric_limits<double>::quiet_NaN();
};

// Conjugate over all of L_0(p), realized with centered point indicators as
// the spanning statistics; verifies the escort stationarity condition at the
// maximizer.
HFullResult h_full(const PhiExponentialFamily& fam, const Vector& u_star,
                   const ConjugateOptions& opts = {});

}  // namespace defexp
