#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace defexp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Density values are stored with respect to the reference weights mu, so a
// valid density q satisfies q >= 0 and sum_x q(x) mu(x) = 1.
struct Density {
  Vector values;
};

// Finite sample space with a strictly positive reference measure.
class SampleSpace {
 public:
  SampleSpace(std::vector<std::string> labels, Vector mu);

  int size() const noexcept { return static_cast<int>(mu_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Vector& mu() const noexcept { return mu_; }

  bool is_density(const Vector& values, double tol = 1e-12) const;
  // Validating constructor for Density; throws on negative entries or a
  // mu-weighted sum away from 1.
  Density density(Vector values) const;
  Density uniform_density() const;

  // E_p[u] = sum_x u(x) p(x) mu(x)
  double expectation(const Density& p, const Vector& u) const;
  Vector center(const Density& p, const Vector& u) const;
  double covariance(const Density& p, const Vector& u, const Vector& v) const;

  // E_p-orthogonal projection of target onto span(basis). The Gram solve uses
  // a pseudo-inverse with singular values below 1e-10 * sigma_max treated as
  // zero, so linearly dependent bases are handled deterministically.
  Vector project_onto_span(const Density& p, const std::vector<Vector>& basis,
                           const Vector& target) const;

 private:
  void require_size(const Vector& v, const char* what) const;

  std::vector<std::string> labels_;
  Vector mu_;
};

}  // namespace defexp
