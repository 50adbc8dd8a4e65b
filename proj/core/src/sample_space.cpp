#include "defexp/sample_space.hpp"

#include "defexp/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <set>

namespace defexp {

SampleSpace::SampleSpace(std::vector<std::string> labels, Vector mu)
    : labels_(std::move(labels)), mu_(std::move(mu)) {
  if (static_cast<int>(labels_.size()) != mu_.size()) {
    fail(errc::validation, "labels and mu must have the same length", "labels");
  }
  if (mu_.size() < 2) {
    fail(errc::validation, "a sample space needs at least two points", "mu");
  }
  for (int i = 0; i < mu_.size(); ++i) {
    if (!(mu_[i] > 0.0)) {
      fail(errc::validation, "reference weights must be strictly positive",
           "mu[" + std::to_string(i) + "]");
    }
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!seen.insert(labels_[i]).second) {
      fail(errc::validation, "labels must be distinct", "labels[" + std::to_string(i) + "]");
    }
  }
}

void SampleSpace::require_size(const Vector& v, const char* what) const {
  if (v.size() != mu_.size()) {
    fail(errc::validation, std::string(what) + ": expected " + std::to_string(mu_.size()) +
                               " entries, got " + std::to_string(v.size()));
  }
}

bool SampleSpace::is_density(const Vector& values, double tol) const {
  if (values.size() != mu_.size()) return false;
  for (int i = 0; i < values.size(); ++i) {
    if (values[i] < -tol || std::isnan(values[i])) return false;
  }
  return std::abs(values.dot(mu_) - 1.0) <= tol;
}

Density SampleSpace::density(Vector values) const {
  require_size(values, "density");
  for (int i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0 || std::isnan(values[i])) {
      fail(errc::validation, "density values must be nonnegative",
           "density[" + std::to_string(i) + "]");
    }
  }
  const double mass = values.dot(mu_);
  if (std::abs(mass - 1.0) > 1e-12) {
    fail(errc::validation,
         "density does not sum to 1 under mu (got " + std::to_string(mass) + ")");
  }
  return Density{std::move(values)};
}

Density SampleSpace::uniform_density() const {
  return Density{Vector::Constant(mu_.size(), 1.0 / mu_.sum())};
}

double SampleSpace::expectation(const Density& p, const Vector& u) const {
  require_size(p.values, "expectation: density");
  require_size(u, "expectation: random variable");
  return (u.array() * p.values.array() * mu_.array()).sum();
}

Vector SampleSpace::center(const Density& p, const Vector& u) const {
  return (u.array() - expectation(p, u)).matrix();
}

double SampleSpace::covariance(const Density& p, const Vector& u, const Vector& v) const {
  const Vector uc = center(p, u);
  const Vector vc = center(p, v);
  return (uc.array() * vc.array() * p.values.array() * mu_.array()).sum();
}

Vector SampleSpace::project_onto_span(const Density& p, const std::vector<Vector>& basis,
                                      const Vector& target) const {
  require_size(target, "projection target");
  if (basis.empty()) return Vector::Zero(mu_.size());
  const int m = static_cast<int>(basis.size());
  for (int j = 0; j < m; ++j) {
    require_size(basis[j], "projection basis");
    if (std::abs(expectation(p, basis[j])) > 1e-8) {
      fail(errc::validation, "projection basis must be centered under p",
           "basis[" + std::to_string(j) + "]");
    }
  }
  Matrix gram(m, m);
  Vector rhs(m);
  const Vector weight = p.values.cwiseProduct(mu_);
  for (int j = 0; j < m; ++j) {
    rhs[j] = (basis[j].array() * target.array() * weight.array()).sum();
    for (int k = j; k < m; ++k) {
      gram(j, k) = gram(k, j) = (basis[j].array() * basis[k].array() * weight.array()).sum();
    }
  }
  // Pseudo-inverse solve; singular values below 1e-10 * sigma_max count as
  // zero so linearly dependent statistics get a deterministic answer.
  Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  const Vector coeff = svd.solve(rhs);
  Vector projection = Vector::Zero(mu_.size());
  for (int j = 0; j < m; ++j) projection += coeff[j] * basis[j];
  return projection;
}

}  // namespace defexp
