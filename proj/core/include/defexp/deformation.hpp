#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace defexp {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  int max_subdivisions = 100000;
};

struct InversionConfig {
  double tol = 1e-12;
  int max_iter = 200;
};

// Deformations built from a raw rate function cannot be validated globally;
// positivity and convexity of the induced exponential are checked on this
// sampled grid at construction time.
struct RateValidationConfig {
  double lo = -50.0;
  double hi = 50.0;
  int points = 10000;
  bool enabled = true;
};

enum class DeformationKind { classical, kaniadakis, from_psi, self_dual_sigma };

struct SelfDualReport {
  bool self_dual = false;
  double max_deviation = 0.0;
};

// Tabulated rate function, kept around for JSON round trips.
struct PsiTable {
  std::vector<double> u;
  std::vector<double> psi;
};

// A deformed logarithm/exponential pair. The generating function `phi` is
// positive and increasing on the positive reals; ln_phi integrates 1/phi from
// 1 and exp_phi is its inverse, so ln_phi(1) = 0 and exp_phi(0) = 1. The rate
// function psi(u) = phi(exp_phi u)/exp_phi u drives both derivatives:
// exp_phi' = psi * exp_phi and exp_phi'' = (psi' + psi^2) * exp_phi.
//
// Immutable after construction; all member functions are pure and safe to
// call concurrently.
class Deformation {
 public:
  using ScalarFn = std::function<double(double)>;
  using BinaryFn = std::function<double(double, double)>;

  // phi(v) = v: ordinary logarithm and exponential.
  static Deformation classical();

  // phi(v) = 2v/(v^kappa + v^-kappa), kappa in [0,1). kappa below 1e-12
  // dispatches to the classical family. Evaluation uses the equivalent
  // sinh/asinh/cosh forms, which stay accurate as kappa -> 0.
  static Deformation kaniadakis(double kappa, QuadratureConfig quad = {},
                                InversionConfig inv = {});

  // Built from a rate function psi > 0 with psi' + psi^2 >= 0. The primitive
  // is Psi(u) = integral_0^u psi, so exp_phi(u) = exp(Psi(u)), ln_phi inverts
  // Psi(u) = ln v, and phi(v) = v * psi(ln_phi v). When dpsi is absent the
  // second derivative falls back to a central difference of psi.
  static Deformation from_psi(ScalarFn psi, std::optional<ScalarFn> dpsi = std::nullopt,
                              QuadratureConfig quad = {}, InversionConfig inv = {},
                              RateValidationConfig validation = {});

  // Rate function given as a table, interpolated monotone-cubically and
  // extrapolated by its boundary values. This is the JSON-loadable form.
  static Deformation from_psi_table(std::vector<double> u, std::vector<double> psi,
                                    QuadratureConfig quad = {}, InversionConfig inv = {},
                                    RateValidationConfig validation = {});

  // phi(v) = v * sigma(v^q, v^-q) for a symmetric sigma; self-dual by
  // construction. ln_phi integrates 1/phi by adaptive quadrature and exp_phi
  // inverts it by safeguarded Newton.
  static Deformation self_dual_sigma(BinaryFn sigma, double q, QuadratureConfig quad = {},
                                     InversionConfig inv = {});

  DeformationKind kind() const noexcept;
  // Only meaningful for the kaniadakis kind.
  double kappa() const;
  // Present when the deformation was built from a table (JSON round trips).
  const std::optional<PsiTable>& psi_table() const noexcept;

  double phi(double v) const;
  double psi(double u) const;
  double ln_phi(double v) const;
  double exp_phi(double u) const;
  double exp_phi_d1(double u) const;
  double exp_phi_d2(double u) const;

  // Checks |exp_phi(u) exp_phi(-u) - 1| <= tol over the grid; non-finite
  // products count as failures with infinite deviation.
  SelfDualReport is_self_dual(std::span<const double> grid, double tol) const;

  // True when self-duality holds by construction (classical, kaniadakis,
  // symmetric-sigma); from_psi deformations require the sampled check.
  bool self_dual_by_construction() const noexcept;

  const QuadratureConfig& quadrature_config() const noexcept;
  const InversionConfig& inversion_config() const noexcept;

  // Opaque evaluation backend, defined in the implementation file.
  struct Impl;

 private:
  explicit Deformation(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace defexp
