#include "defexp/conjugate.hpp"

#include "defexp/errors.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace defexp {

namespace {

struct NewtonOutcome {
  Vector theta;
  double value = 0.0;
  double grad_norm = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<double> values_seen;  // monotone by the line search
};

// Damped Newton ascent on the concave g(theta) = theta.eta - alpha(theta),
// started at 0. Backtracking keeps every accepted step an improvement, so the
// recorded values are a monotone lower-bound sequence even when the supremum
// is not attained.
NewtonOutcome maximize_conjugate_objective(const PhiExponentialFamily& fam, const Vector& eta,
                                           double grad_tol, int max_iter) {
  NewtonOutcome out;
  out.theta = Vector::Zero(fam.dimension());
  auto objective = [&](const Vector& t) { return t.dot(eta) - fam.alpha(t); };
  out.value = objective(out.theta);
  out.values_seen.push_back(out.value);

  for (int it = 0; it < max_iter; ++it) {
    const Vector grad = eta - fam.grad_alpha(out.theta);
    out.grad_norm = grad.norm();
    out.iterations = it;
    if (out.grad_norm <= grad_tol) {
      out.converged = true;
      return out;
    }
    const Matrix hess = fam.hessian_alpha(out.theta);
    Vector direction = hess.ldlt().solve(grad);
    if (!direction.allFinite() || grad.dot(direction) <= 0.0) {
      direction = grad;  // fall back to plain ascent
    }
    double step = 1.0;
    const double slope = grad.dot(direction);
    bool moved = false;
    while (step > 1e-14) {
      const Vector candidate = out.theta + step * direction;
      const double value = objective(candidate);
      // Strict improvement: once the predicted gain underflows, equality
      // would otherwise accept zero-progress steps forever.
      if (std::isfinite(value) && value > out.value &&
          value >= out.value + 1e-4 * step * slope) {
        out.theta = candidate;
        out.value = value;
        out.values_seen.push_back(value);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // Objective improvements have fallen below the normalization solver's
      // noise floor. Inside the quadratic basin the gradient is still
      // resolvable, so polish the stationarity condition with undamped
      // Newton steps; large steps mean we are not in a basin (boundary
      // drift) and the ascent result stands as reported.
      Vector best_theta = out.theta;
      double best_norm = out.grad_norm;
      Vector probe = out.theta;
      for (int polish = 0; polish < 30; ++polish) {
        const Vector g = eta - fam.grad_alpha(probe);
        const double norm = g.norm();
        if (norm < best_norm) {
          best_norm = norm;
          best_theta = probe;
        }
        if (norm <= grad_tol) break;
        const Vector delta = fam.hessian_alpha(probe).ldlt().solve(g);
        if (!delta.allFinite() || delta.norm() > 1.0) break;
        probe += delta;
      }
      out.theta = best_theta;
      out.grad_norm = best_norm;
      out.value = objective(best_theta);
      out.iterations = it + 1;
      out.converged = best_norm <= grad_tol;
      return out;
    }
  }
  out.iterations = max_iter;
  const Vector grad = eta - fam.grad_alpha(out.theta);
  out.grad_norm = grad.norm();
  out.converged = out.grad_norm <= grad_tol;
  return out;
}

std::vector<double> divergence_witness(const PhiExponentialFamily& fam,
                                       const SeparationCertificate& cert, const Vector& eta,
                                       const ConjugateOptions& opts) {
  std::vector<double> values;
  values.reserve(64);
  for (int n = 1; n <= opts.witness_max_steps; ++n) {
    const Vector theta = n * cert.a;
    const double g = theta.dot(eta) - fam.alpha(theta);
    values.push_back(g);
    if (g > opts.witness_bound) break;
  }
  return values;
}

}  // namespace

ConjugateResult alpha_star(const PhiExponentialFamily& fam, const Vector& eta,
                           const ConjugateOptions& opts) {
  if (eta.size() != fam.dimension()) {
    fail(errc::validation, "eta has " + std::to_string(eta.size()) + " entries, expected " +
                               std::to_string(fam.dimension()),
         "eta");
  }
  const auto polytope = MarginalPolytope::build(fam.statistics(), opts.lp_tol);
  const auto membership = polytope.contains(eta);

  ConjugateResult result;
  if (!is_member(membership)) {
    result.status = ConjugateStatus::infinite_outside;
    result.value = std::numeric_limits<double>::infinity();
    result.certificate = std::get<SeparationCertificate>(membership);
    result.diagnostics.witness = divergence_witness(fam, *result.certificate, eta, opts);
    return result;
  }

  const bool reduced = polytope.hull_dimension() < fam.dimension();
  result.diagnostics.reduced_coordinates = reduced;

  // Work in hull coordinates when the statistics are linearly dependent; the
  // lifted maximizer theta = B theta_r is the minimum-norm representative.
  const Matrix& basis = polytope.hull_basis();
  PhiExponentialFamily working =
      reduced ? PhiExponentialFamily(fam.deformation(), fam.space(), fam.base_density(),
                                     basis.transpose() * fam.statistics(), fam.tolerances())
              : fam;
  const Vector eta_working = reduced ? Vector(basis.transpose() * eta) : eta;

  const auto interior = polytope.relative_interior_contains(eta);
  if (interior.inside) {
    const auto newton = maximize_conjugate_objective(working, eta_working, opts.newton_tol,
                                                     opts.max_iter);
    if (!newton.converged) {
      std::string best = "[";
      for (int j = 0; j < newton.theta.size(); ++j) {
        if (j) best += ", ";
        best += std::to_string(newton.theta[j]);
      }
      best += "]";
      fail(errc::numerical,
           "conjugate Newton did not converge after " + std::to_string(newton.iterations) +
               " iterations (|grad| = " + std::to_string(newton.grad_norm) +
               ", best iterate " + best + ")");
    }
    result.status = ConjugateStatus::attained_interior;
    result.value = newton.value;
    result.maximizer = reduced ? Vector(basis * newton.theta) : newton.theta;
    result.diagnostics.iterations = newton.iterations;
    result.diagnostics.grad_norm = newton.grad_norm;
    return result;
  }

  // Boundary: the supremum is finite but need not be attained. Report the
  // monotone sequence of attained values without claiming convergence.
  const auto ascent = maximize_conjugate_objective(working, eta_working, opts.newton_tol,
                                                   opts.boundary_max_iter);
  result.status = ConjugateStatus::finite_boundary;
  result.value = ascent.value;
  result.diagnostics.iterations = ascent.iterations;
  result.diagnostics.grad_norm = ascent.grad_norm;
  result.diagnostics.lower_bounds = ascent.values_seen;
  return result;
}

LegendreReport legendre_check(const PhiExponentialFamily& fam, const Vector& theta,
                              const ConjugateOptions& opts) {
  LegendreReport report;
  report.eta = fam.grad_alpha(theta);
  report.alpha_theta = fam.alpha(theta);
  const auto conj = alpha_star(fam, report.eta, opts);
  if (conj.status != ConjugateStatus::attained_interior || !conj.maximizer) {
    fail(errc::numerical, "gradient image was not classified as a relative-interior point");
  }
  report.theta_hat = *conj.maximizer;
  report.conjugate_value = conj.value;
  report.reduced_coordinates = conj.diagnostics.reduced_coordinates;
  report.value_residual =
      std::abs(conj.value - (theta.dot(report.eta) - report.alpha_theta));
  report.theta_residual = report.reduced_coordinates
                              ? std::numeric_limits<double>::quiet_NaN()
                              : (report.theta_hat - theta).cwiseAbs().maxCoeff();
  report.ok = report.value_residual <= 1e-9 &&
              (report.reduced_coordinates || report.theta_residual <= 1e-7);
  return report;
}

HvResult h_v(const PhiExponentialFamily& fam, const Vector& u_star,
             const ConjugateOptions& opts) {
  if (u_star.size() != fam.points()) {
    fail(errc::validation, "u_star must have one entry per point", "u_star");
  }
  const auto& space = fam.space();
  const auto& p = fam.base_density();
  const double mean = space.expectation(p, u_star);
  if (std::abs(mean) > 1e-10) {
    fail(errc::validation,
         "u_star must be centered under the base density (E_p[u*] = " + std::to_string(mean) +
             ")",
         "u_star");
  }
  HvResult out;
  const Vector shifted = (u_star.array() + 1.0).matrix();
  out.eta.resize(fam.dimension());
  for (int j = 0; j < fam.dimension(); ++j) {
    out.eta[j] = space.expectation(p, shifted.cwiseProduct(fam.statistics().row(j).transpose()));
  }
  out.density_predicate = space.is_density(shifted.cwiseProduct(p.values), 1e-12);
  out.conjugate = alpha_star(fam, out.eta, opts);
  return out;
}

HFullResult h_full(const PhiExponentialFamily& fam, const Vector& u_star,
                   const ConjugateOptions& opts) {
  // Span all of L_0(p) with point indicators as statistics.
  const int n = fam.points();
  PhiExponentialFamily indicator_family(fam.deformation(), fam.space(), fam.base_density(),
                                        Matrix::Identity(n, n), fam.tolerances());
  HFullResult out{h_v(indicator_family, u_star, opts), std::nullopt,
                  std::numeric_limits<double>::quiet_NaN()};
  if (out.hv.conjugate.status == ConjugateStatus::attained_interior &&
      out.hv.conjugate.maximizer) {
    const auto chart = indicator_family.theta_to_u(*out.hv.conjugate.maximizer);
    out.u_hat = chart.u.u;
    const Density esc = indicator_family.escort(chart.u.u);
    const Vector target =
        (u_star.array() + 1.0).matrix().cwiseProduct(fam.base_density().values);
    out.stationarity_residual = (esc.values - target).cwiseAbs().maxCoeff();
  }
  return out;
}

const char* conjugate_status_name(ConjugateStatus s) noexcept {
  switch (s) {
    case ConjugateStatus::attained_interior: return "attained_interior";
    case ConjugateStatus::finite_boundary: return "finite_boundary";
    case ConjugateStatus::infinite_outside: return "infinite_outside";
  }
  return "unknown";
}

}  // namespace defexp
