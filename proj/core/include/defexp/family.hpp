#pragma once

#include "defexp/deformation.hpp"
#include "defexp/sample_space.hpp"

namespace defexp {

struct FamilyTolerances {
  double alpha_tol = 1e-12;   // residual tolerance on |E_p[exp_phi(...)] - 1|
  int newton_max_iter = 100;  // normalization solver iteration cap
};

// A point of the nonparametric chart: coefficients in the centered statistic
// basis together with the materialized random variable u = sum_j c_j v_j.
struct UCoordinate {
  Vector coefficients;
  Vector u;
};

struct ChartPoint {
  UCoordinate u;
  double K = 0.0;
};

// The deformed exponential family p_theta = exp_phi(theta.H - alpha(theta)) p
// over a finite sample space, with the chart u <-> theta, the normalization
// functional K, escort densities, and directional derivatives of K.
//
// Immutable after construction; all operations are pure.
class PhiExponentialFamily {
 public:
  // statistics is m x n: row j holds H_j over the n points. The base density
  // must be strictly positive.
  PhiExponentialFamily(Deformation deformation, SampleSpace space, Density base,
                       Matrix statistics, FamilyTolerances tolerances = {});

  const Deformation& deformation() const noexcept { return deformation_; }
  const SampleSpace& space() const noexcept { return space_; }
  const Density& base_density() const noexcept { return base_; }
  const Matrix& statistics() const noexcept { return stats_; }
  const Vector& statistic_means() const noexcept { return stat_means_; }
  // Row j is v_j = H_j - E_p[H_j].
  const Matrix& centered_basis() const noexcept { return centered_; }
  int dimension() const noexcept { return static_cast<int>(stats_.rows()); }
  int points() const noexcept { return static_cast<int>(stats_.cols()); }
  const FamilyTolerances& tolerances() const noexcept { return tol_; }

  // The unique alpha with E_p[exp_phi(theta.H - alpha)] = 1, solved by
  // safeguarded Newton inside the bracket [min theta.H, max theta.H] with a
  // residual-based stopping rule.
  double alpha(const Vector& theta) const;
  Density density(const Vector& theta) const;

  ChartPoint theta_to_u(const Vector& theta) const;
  Vector u_to_theta(const UCoordinate& u) const;

  // Normalization of the chart: the unique K with E_p[exp_phi(u - K)] = 1.
  // Defined for any random variable u, not only elements of V.
  double K(const Vector& u) const;

  // Escort density: proportional to phi(p_u/p) * p, normalized under mu.
  Density escort(const Vector& u) const;

  // DK(u)v as the escort expectation of v.
  double dK(const Vector& u, const Vector& v) const;

  // D2K(u)vw = E_p[exp_phi''(u-K)(v - DKv)(w - DKw)] / E_p[exp_phi'(u-K)];
  // symmetric, and positive definite in v = w != 0.
  double d2K(const Vector& u, const Vector& v, const Vector& w) const;

  // E_p[ln_phi(p/q)]. Requires a self-dual deformation; refuses otherwise.
  double divergence(const Density& q) const;

  // u = ln_phi(q/p) - E_p[ln_phi(q/p)], the chart coordinate of q when q lies
  // in the model.
  Vector recover_u(const Density& q) const;

  // grad_alpha_j = escort expectation of H_j; hessian is d2K over the
  // centered basis.
  Vector grad_alpha(const Vector& theta) const;
  Matrix hessian_alpha(const Vector& theta) const;

 private:
  Vector theta_dot_stats(const Vector& theta) const;
  // exp_phi(u - K) pointwise, shared by density/escort/derivative paths.
  Vector chart_ratios(const Vector& u, double K_value) const;

  Deformation deformation_;
  SampleSpace space_;
  Density base_;
  Matrix stats_;
  Vector stat_means_;
  Matrix centered_;
  FamilyTolerances tol_;
};

}  // namespace defexp
