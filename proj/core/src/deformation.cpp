#include "defexp/deformation.hpp"

#include "defexp/errors.hpp"
#include "detail/pchip.hpp"
#include "detail/quadrature.hpp"
#include "detail/root_find.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace defexp {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    fail(errc::domain, std::string(what) + " requires a strictly positive argument");
  }
}

// Central difference with a scale-aware step (second derivatives downstream
// only need ~1e-4 relative accuracy).
template <typename F>
double central_difference(const F& f, double u) {
  const double h = std::max(1e-6, 1e-8 * std::abs(u));
  return (f(u + h) - f(u - h)) / (2.0 * h);
}

}  // namespace

struct Deformation::Impl {
  DeformationKind kind;
  QuadratureConfig quad;
  InversionConfig inv;
  bool self_dual = false;
  double kappa = 0.0;
  std::optional<PsiTable> table;

  virtual ~Impl() = default;
  virtual double phi(double v) const = 0;
  virtual double psi(double u) const = 0;
  virtual double ln_phi(double v) const = 0;
  virtual double exp_phi(double u) const = 0;
  virtual double dpsi(double u) const = 0;
};

namespace {

struct ClassicalImpl final : Deformation::Impl {
  ClassicalImpl() {
    kind = DeformationKind::classical;
    self_dual = true;
  }
  double phi(double v) const override { return v; }
  double psi(double) const override { return 1.0; }
  double ln_phi(double v) const override { return std::log(v); }
  double exp_phi(double u) const override { return std::exp(u); }
  double dpsi(double) const override { return 0.0; }
};

// Closed forms written through sinh/cosh/asinh of kappa*ln v, which remain
// accurate for small kappa (the naive power forms cancel catastrophically).
struct KaniadakisImpl final : Deformation::Impl {
  explicit KaniadakisImpl(double k) {
    kind = DeformationKind::kaniadakis;
    self_dual = true;
    kappa = k;
  }
  double phi(double v) const override { return v / std::cosh(kappa * std::log(v)); }
  double psi(double u) const override { return 1.0 / std::sqrt(1.0 + kappa * kappa * u * u); }
  double ln_phi(double v) const override { return std::sinh(kappa * std::log(v)) / kappa; }
  double exp_phi(double u) const override { return std::exp(std::asinh(kappa * u) / kappa); }
  double dpsi(double u) const override {
    const double s = 1.0 + kappa * kappa * u * u;
    return -kappa * kappa * u / (s * std::sqrt(s));
  }
};

// Rate-function construction: the primitive is Psi(u) = integral_0^u psi, so
// exp_phi = exp(Psi), ln_phi inverts Psi(u) = ln v, and phi(v) comes from the
// identity phi = v * psi(ln_phi v).
struct FromPsiImpl : Deformation::Impl {
  Deformation::ScalarFn psi_fn;
  std::optional<Deformation::ScalarFn> dpsi_fn;

  FromPsiImpl(Deformation::ScalarFn f, std::optional<Deformation::ScalarFn> df,
              QuadratureConfig q, InversionConfig i) {
    kind = DeformationKind::from_psi;
    psi_fn = std::move(f);
    dpsi_fn = std::move(df);
    quad = q;
    inv = i;
  }

  double rate_integral(double u) const {
    if (u == 0.0) return 0.0;
    return detail::adaptive_simpson([this](double s) { return psi_fn(s); }, 0.0, u,
                                    quad.abs_tol, quad.max_subdivisions);
  }

  double phi(double v) const override { return v * psi_fn(ln_phi(v)); }
  double psi(double u) const override { return psi_fn(u); }

  double ln_phi(double v) const override {
    const double target = std::log(v);
    auto g = [this](double u) { return rate_integral(u); };
    double lo, hi;
    detail::expand_real_bracket(g, target, lo, hi, "ln_phi");
    auto residual = [&](double u) { return target - g(u); };
    auto slope = [&](double u) { return -psi_fn(u); };
    return detail::newton_decreasing(residual, slope, lo, hi, inv.tol, inv.max_iter, "ln_phi");
  }

  double exp_phi(double u) const override { return std::exp(rate_integral(u)); }

  double dpsi(double u) const override {
    if (dpsi_fn) return (*dpsi_fn)(u);
    return central_difference(psi_fn, u);
  }
};

// Direct phi(v) = v * sigma(v^q, v^-q); ln_phi by adaptive quadrature of
// 1/phi and exp_phi by safeguarded Newton inversion on a multiplicative
// bracket.
struct SigmaImpl final : Deformation::Impl {
  Deformation::BinaryFn sigma;
  double q;

  SigmaImpl(Deformation::BinaryFn s, double q_in, QuadratureConfig qc, InversionConfig ic)
      : sigma(std::move(s)), q(q_in) {
    kind = DeformationKind::self_dual_sigma;
    self_dual = true;
    quad = qc;
    inv = ic;
  }

  double phi(double v) const override {
    const double t = std::pow(v, q);
    return v * sigma(t, 1.0 / t);
  }

  double psi(double u) const override {
    const double e = exp_phi(u);
    return phi(e) / e;
  }

  double ln_phi(double v) const override {
    if (v == 1.0) return 0.0;
    return detail::adaptive_simpson([this](double y) { return 1.0 / phi(y); },
                                    std::min(1.0, v), std::max(1.0, v), quad.abs_tol,
                                    quad.max_subdivisions) *
           (v >= 1.0 ? 1.0 : -1.0);
  }

  double exp_phi(double u) const override {
    if (u == 0.0) return 1.0;
    auto g = [this](double v) { return ln_phi(v); };
    double lo, hi;
    detail::expand_positive_bracket(g, u, lo, hi, "exp_phi");
    auto residual = [&](double v) { return u - g(v); };
    auto slope = [&](double v) { return -1.0 / phi(v); };
    return detail::newton_decreasing(residual, slope, lo, hi, inv.tol, inv.max_iter, "exp_phi");
  }

  double dpsi(double u) const override {
    return central_difference([this](double x) { return psi(x); }, u);
  }
};

struct TablePsiImpl final : FromPsiImpl {
  TablePsiImpl(detail::MonotoneCubic interp, QuadratureConfig q, InversionConfig i)
      : FromPsiImpl({}, {}, q, i) {
    auto shared = std::make_shared<detail::MonotoneCubic>(std::move(interp));
    psi_fn = [shared](double u) { return (*shared)(u); };
    dpsi_fn = [shared](double u) { return shared->derivative(u); };
    table = PsiTable{shared->knots(), shared->values()};
  }
};

// Sampled stand-in for the global standing assumptions: positivity of psi and
// convexity of the induced exponential. Points where psi overflows cannot be
// checked and are skipped.
void validate_rate_function(const Deformation::Impl& impl, const RateValidationConfig& cfg) {
  if (!cfg.enabled || cfg.points < 2) return;
  const double step = (cfg.hi - cfg.lo) / (cfg.points - 1);
  for (int i = 0; i < cfg.points; ++i) {
    const double u = cfg.lo + i * step;
    const double value = impl.psi(u);
    if (std::isnan(value) || value <= 0.0) {
      fail(errc::domain, "rate function must be strictly positive (failed at u=" +
                             std::to_string(u) + ")");
    }
    if (!std::isfinite(value)) continue;
    const double convexity = impl.dpsi(u) + value * value;
    if (std::isfinite(convexity) && convexity < -1e-9 * std::max(1.0, value * value)) {
      fail(errc::domain, "rate function violates psi' + psi^2 >= 0 (failed at u=" +
                             std::to_string(u) + ")");
    }
  }
}

}  // namespace

Deformation Deformation::classical() {
  return Deformation(std::make_shared<const ClassicalImpl>());
}

Deformation Deformation::kaniadakis(double kappa, QuadratureConfig quad, InversionConfig inv) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    fail(errc::validation, "kappa must lie in [0, 1)", "kappa");
  }
  if (kappa < 1e-12) return classical();
  auto impl = std::make_shared<KaniadakisImpl>(kappa);
  impl->quad = quad;
  impl->inv = inv;
  return Deformation(std::move(impl));
}

Deformation Deformation::from_psi(ScalarFn psi, std::optional<ScalarFn> dpsi,
                                  QuadratureConfig quad, InversionConfig inv,
                                  RateValidationConfig validation) {
  if (!psi) fail(errc::validation, "from_psi requires a rate function");
  auto impl = std::make_shared<const FromPsiImpl>(std::move(psi), std::move(dpsi), quad, inv);
  validate_rate_function(*impl, validation);
  return Deformation(std::move(impl));
}

Deformation Deformation::from_psi_table(std::vector<double> u, std::vector<double> psi,
                                        QuadratureConfig quad, InversionConfig inv,
                                        RateValidationConfig validation) {
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (!(psi[i] > 0.0)) {
      fail(errc::validation, "psi_table values must be strictly positive",
           "psi_table.psi[" + std::to_string(i) + "]");
    }
  }
  detail::MonotoneCubic interp(std::move(u), std::move(psi));
  auto impl = std::make_shared<const TablePsiImpl>(std::move(interp), quad, inv);
  validate_rate_function(*impl, validation);
  return Deformation(std::move(impl));
}

Deformation Deformation::self_dual_sigma(BinaryFn sigma, double q, QuadratureConfig quad,
                                         InversionConfig inv) {
  if (!sigma) fail(errc::validation, "self_dual_sigma requires a sigma function");
  auto impl = std::make_shared<const SigmaImpl>(std::move(sigma), q, quad, inv);
  // phi must be positive and increasing; spot-check a log-spaced grid.
  double prev = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double v = std::pow(10.0, -4.0 + i * 0.125);
    const double value = impl->phi(v);
    if (!(value > 0.0) || !std::isfinite(value)) {
      fail(errc::domain, "sigma construction yields a non-positive phi");
    }
    if (i > 0 && value <= prev) {
      fail(errc::domain, "sigma construction yields a non-increasing phi");
    }
    prev = value;
  }
  return Deformation(std::move(impl));
}

DeformationKind Deformation::kind() const noexcept { return impl_->kind; }

double Deformation::kappa() const {
  if (impl_->kind != DeformationKind::kaniadakis) {
    fail(errc::unsupported, "kappa is only defined for the kaniadakis kind");
  }
  return impl_->kappa;
}

const std::optional<PsiTable>& Deformation::psi_table() const noexcept { return impl_->table; }

double Deformation::phi(double v) const {
  require_positive(v, "phi");
  return impl_->phi(v);
}

double Deformation::psi(double u) const { return impl_->psi(u); }

double Deformation::ln_phi(double v) const {
  require_positive(v, "ln_phi");
  return impl_->ln_phi(v);
}

double Deformation::exp_phi(double u) const { return impl_->exp_phi(u); }

double Deformation::exp_phi_d1(double u) const { return impl_->psi(u) * impl_->exp_phi(u); }

double Deformation::exp_phi_d2(double u) const {
  const double rate = impl_->psi(u);
  return (impl_->dpsi(u) + rate * rate) * impl_->exp_phi(u);
}

SelfDualReport Deformation::is_self_dual(std::span<const double> grid, double tol) const {
  if (grid.empty()) fail(errc::validation, "self-duality check requires a nonempty grid");
  SelfDualReport report;
  for (double u : grid) {
    const double product = impl_->exp_phi(u) * impl_->exp_phi(-u);
    const double deviation =
        std::isfinite(product) ? std::abs(product - 1.0) : std::numeric_limits<double>::infinity();
    report.max_deviation = std::max(report.max_deviation, deviation);
  }
  report.self_dual = report.max_deviation <= tol;
  return report;
}

bool Deformation::self_dual_by_construction() const noexcept { return impl_->self_dual; }

const QuadratureConfig& Deformation::quadrature_config() const noexcept { return impl_->quad; }
const InversionConfig& Deformation::inversion_config() const noexcept { return impl_->inv; }

const char* errc_name(errc kind) noexcept {
  switch (kind) {
    case errc::validation: return "validation";
    case errc::domain: return "domain";
    case errc::numerical: return "numerical";
    case errc::quadrature: return "quadrature";
    case errc::unsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace defexp
