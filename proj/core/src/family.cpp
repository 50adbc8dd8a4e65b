#include "defexp/family.hpp"

#include "defexp/errors.hpp"
#include "detail/root_find.hpp"

#include <array>
#include <cmath>

namespace defexp {

namespace {

// Grid for the runtime self-duality gate on deformations without the
// by-construction guarantee.
std::array<double, 41> self_duality_grid() {
  std::array<double, 41> grid{};
  for (int i = 0; i < 41; ++i) grid[i] = -10.0 + 0.5 * i;
  return grid;
}

}  // namespace

PhiExponentialFamily::PhiExponentialFamily(Deformation deformation, SampleSpace space,
                                           Density base, Matrix statistics,
                                           FamilyTolerances tolerances)
    : deformation_(std::move(deformation)),
      space_(std::move(space)),
      base_(std::move(base)),
      stats_(std::move(statistics)),
      tol_(tolerances) {
  if (base_.values.size() != space_.size()) {
    fail(errc::validation, "base density size does not match the sample space", "base_density");
  }
  for (int i = 0; i < base_.values.size(); ++i) {
    if (!(base_.values[i] > 0.0)) {
      fail(errc::validation, "base density must be strictly positive",
           "base_density[" + std::to_string(i) + "]");
    }
  }
  if (!space_.is_density(base_.values, 1e-12)) {
    fail(errc::validation, "base density does not sum to 1 under mu", "base_density");
  }
  if (stats_.rows() < 1) {
    fail(errc::validation, "at least one statistic is required", "statistics");
  }
  if (stats_.cols() != space_.size()) {
    fail(errc::validation, "statistics must have one column per point", "statistics");
  }
  stat_means_.resize(stats_.rows());
  centered_.resizeLike(stats_);
  for (int j = 0; j < stats_.rows(); ++j) {
    stat_means_[j] = space_.expectation(base_, stats_.row(j).transpose());
    centered_.row(j) = stats_.row(j).array() - stat_means_[j];
  }
}

Vector PhiExponentialFamily::theta_dot_stats(const Vector& theta) const {
  if (theta.size() != stats_.rows()) {
    fail(errc::validation, "theta has " + std::to_string(theta.size()) + " entries, expected " +
                               std::to_string(stats_.rows()),
         "theta");
  }
  return stats_.transpose() * theta;
}

double PhiExponentialFamily::alpha(const Vector& theta) const {
  return K(theta_dot_stats(theta));
}

double PhiExponentialFamily::K(const Vector& u) const {
  if (u.size() != space_.size()) {
    fail(errc::validation, "u must have one entry per point", "u");
  }
  const double lo = u.minCoeff();
  const double hi = u.maxCoeff();
  const Vector weight = base_.values.cwiseProduct(space_.mu());
  // E_p[exp_phi(u - K)] is decreasing in K and brackets 1 on [min u, max u]
  // because exp_phi is increasing with exp_phi(0) = 1.
  auto residual = [&](double k) {
    double sum = 0.0;
    for (int i = 0; i < u.size(); ++i) sum += deformation_.exp_phi(u[i] - k) * weight[i];
    return sum - 1.0;
  };
  auto slope = [&](double k) {
    double sum = 0.0;
    for (int i = 0; i < u.size(); ++i) sum -= deformation_.exp_phi_d1(u[i] - k) * weight[i];
    return sum;
  };
  return detail::newton_decreasing(residual, slope, lo, hi, tol_.alpha_tol,
                                   tol_.newton_max_iter, "normalization");
}

Vector PhiExponentialFamily::chart_ratios(const Vector& u, double K_value) const {
  Vector ratios(u.size());
  for (int i = 0; i < u.size(); ++i) ratios[i] = deformation_.exp_phi(u[i] - K_value);
  return ratios;
}

Density PhiExponentialFamily::density(const Vector& theta) const {
  const Vector s = theta_dot_stats(theta);
  const Vector ratios = chart_ratios(s, K(s));
  return Density{ratios.cwiseProduct(base_.values)};
}

ChartPoint PhiExponentialFamily::theta_to_u(const Vector& theta) const {
  if (theta.size() != stats_.rows()) {
    fail(errc::validation, "theta size mismatch", "theta");
  }
  ChartPoint point;
  point.u.coefficients = theta;
  point.u.u = centered_.transpose() * theta;
  point.K = alpha(theta) - theta.dot(stat_means_);
  return point;
}

Vector PhiExponentialFamily::u_to_theta(const UCoordinate& u) const {
  return u.coefficients;
}

Density PhiExponentialFamily::escort(const Vector& u) const {
  const Vector ratios = chart_ratios(u, K(u));
  Vector weights(u.size());
  for (int i = 0; i < u.size(); ++i) weights[i] = deformation_.phi(ratios[i]);
  const double normalizer =
      (weights.array() * base_.values.array() * space_.mu().array()).sum();
  return Density{weights.cwiseProduct(base_.values) / normalizer};
}

double PhiExponentialFamily::dK(const Vector& u, const Vector& v) const {
  if (v.size() != space_.size()) fail(errc::validation, "direction size mismatch", "v");
  return space_.expectation(escort(u), v);
}

double PhiExponentialFamily::d2K(const Vector& u, const Vector& v, const Vector& w) const {
  if (v.size() != space_.size() || w.size() != space_.size()) {
    fail(errc::validation, "direction size mismatch");
  }
  const double k = K(u);
  const Vector weight = base_.values.cwiseProduct(space_.mu());
  double d1_mass = 0.0, d1_v = 0.0, d1_w = 0.0;
  Vector d2(u.size());
  for (int i = 0; i < u.size(); ++i) {
    const double arg = u[i] - k;
    const double d1 = deformation_.exp_phi_d1(arg);
    d2[i] = deformation_.exp_phi_d2(arg);
    d1_mass += d1 * weight[i];
    d1_v += d1 * v[i] * weight[i];
    d1_w += d1 * w[i] * weight[i];
  }
  const double dKv = d1_v / d1_mass;
  const double dKw = d1_w / d1_mass;
  double numerator = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    // Grouping the centered product first keeps the result bit-identical
    // under swapping v and w.
    const double centered_product = (v[i] - dKv) * (w[i] - dKw);
    numerator += d2[i] * centered_product * weight[i];
  }
  return numerator / d1_mass;
}

double PhiExponentialFamily::divergence(const Density& q) const {
  if (q.values.size() != space_.size()) fail(errc::validation, "density size mismatch", "q");
  for (int i = 0; i < q.values.size(); ++i) {
    if (!(q.values[i] > 0.0)) {
      fail(errc::domain, "divergence requires a strictly positive density",
           "q[" + std::to_string(i) + "]");
    }
  }
  if (!deformation_.self_dual_by_construction()) {
    const auto grid = self_duality_grid();
    const auto report = deformation_.is_self_dual(grid, 1e-8);
    if (!report.self_dual) {
      fail(errc::unsupported,
           "divergence identity needs a self-dual deformation (max deviation " +
               std::to_string(report.max_deviation) + ")");
    }
  }
  double sum = 0.0;
  for (int i = 0; i < q.values.size(); ++i) {
    sum += deformation_.ln_phi(base_.values[i] / q.values[i]) * base_.values[i] *
           space_.mu()[i];
  }
  return sum;
}

Vector PhiExponentialFamily::recover_u(const Density& q) const {
  if (q.values.size() != space_.size()) fail(errc::validation, "density size mismatch", "q");
  Vector w(q.values.size());
  for (int i = 0; i < q.values.size(); ++i) {
    if (!(q.values[i] > 0.0)) {
      fail(errc::domain, "recover_u requires a strictly positive density",
           "q[" + std::to_string(i) + "]");
    }
    w[i] = deformation_.ln_phi(q.values[i] / base_.values[i]);
  }
  return space_.center(base_, w);
}

Vector PhiExponentialFamily::grad_alpha(const Vector& theta) const {
  const Density esc = escort(centered_.transpose() * theta);
  Vector grad(stats_.rows());
  for (int j = 0; j < stats_.rows(); ++j) {
    grad[j] = space_.expectation(esc, stats_.row(j).transpose());
  }
  return grad;
}

Matrix PhiExponentialFamily::hessian_alpha(const Vector& theta) const {
  // One shared pass: K, the derivative weights, and dK(v_j) for every j.
  const Vector u = centered_.transpose() * theta;
  const double k = K(u);
  const int m = static_cast<int>(stats_.rows());
  const int n = static_cast<int>(stats_.cols());
  const Vector weight = base_.values.cwiseProduct(space_.mu());
  Vector d1(n), d2(n);
  double d1_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    const double arg = u[i] - k;
    d1[i] = deformation_.exp_phi_d1(arg);
    d2[i] = deformation_.exp_phi_d2(arg);
    d1_mass += d1[i] * weight[i];
  }
  Vector dK_basis(m);
  for (int j = 0; j < m; ++j) {
    dK_basis[j] = (d1.array() * centered_.row(j).transpose().array() * weight.array()).sum() /
                  d1_mass;
  }
  Matrix hess(m, m);
  for (int j = 0; j < m; ++j) {
    for (int l = j; l < m; ++l) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += d2[i] * (centered_(j, i) - dK_basis[j]) * (centered_(l, i) - dK_basis[l]) *
               weight[i];
      }
      hess(j, l) = hess(l, j) = sum / d1_mass;
    }
  }
  return hess;
}

}  // namespace defexp
