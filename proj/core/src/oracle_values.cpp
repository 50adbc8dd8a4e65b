#include "defexp/json_io.hpp"
#include "defexp/oracle.hpp"

#include <cmath>

// Generator for fixtures/derived_values.json: every worked example value the
// test suite asserts is computed here by an oracle route (quadrature, numeric
// inversion, pure bisection, finite differences, grid supremum, or a short
// hand derivation), never by the code path under test. The output is
// deterministic and canonical, so regeneration is byte-identical.
namespace defexp::oracle {

namespace {

ordered_json entry(ordered_json inputs, ordered_json value, const char* oracle_name,
                   double tolerance) {
  ordered_json e;
  e["inputs"] = std::move(inputs);
  e["value"] = std::move(value);
  e["oracle"] = oracle_name;
  e["tolerance"] = tolerance;
  return e;
}

// The worked three-point space: mu = 1, p = (0.2, 0.3, 0.5), u = (1, 2, 3).
struct ThreePoint {
  Vector mu = Vector::Ones(3);
  Vector p = (Vector(3) << 0.2, 0.3, 0.5).finished();
  Vector u = (Vector(3) << 1.0, 2.0, 3.0).finished();
};

}  // namespace

std::string derived_values_json() {
  ordered_json out;
  const OracleConfig cfg;

  const Deformation kan = Deformation::kaniadakis(0.5);
  auto oracle_exp = [&](double u) { return invert_ln_phi(kan, u, cfg.quad_abs_tol); };
  auto psi_closed = [](double u) { return 1.0 / std::sqrt(1.0 + 0.25 * u * u); };
  auto oracle_phi = [&](double v) { return v * psi_closed(quad_ln_phi(kan, v)); };

  out["deformation.ln_phi.kaniadakis_0p5_v4"] =
      entry({{"kappa", 0.5}, {"v", 4.0}}, quad_ln_phi(kan, 4.0, cfg.quad_abs_tol), "adaptive-simpson", 1e-10);
  out["deformation.exp_phi.kaniadakis_0p5_u1"] =
      entry({{"kappa", 0.5}, {"u", 1.0}}, oracle_exp(1.0), "bisection-inverse-of-quadrature",
            1e-9);
  out["deformation.exp_phi.kaniadakis_0p5_u1p5"] =
      entry({{"kappa", 0.5}, {"u", 1.5}}, oracle_exp(1.5), "bisection-inverse-of-quadrature",
            1e-9);
  out["deformation.phi.kaniadakis_0p5_v4"] =
      entry({{"kappa", 0.5}, {"v", 4.0}}, oracle_phi(4.0), "rate-identity-on-quadrature", 1e-9);
  {
    const double e = oracle_exp(1.5);
    out["deformation.psi.kaniadakis_0p5_u1p5"] =
        entry({{"kappa", 0.5}, {"u", 1.5}}, kan.phi(e) / e, "phi-over-exp-cross-check", 1e-9);
  }
  out["deformation.exp_phi_d1.kaniadakis_0p5_u1p5"] =
      entry({{"kappa", 0.5}, {"u", 1.5}, {"h", cfg.fd_step}},
            fd_derivative(oracle_exp, 1.5, cfg.fd_step), "central-difference-of-inverse", 1e-5);
  out["deformation.exp_phi_d2.kaniadakis_0p5_u0"] =
      entry({{"kappa", 0.5}, {"u", 0.0}, {"h", 1e-4}},
            fd_second_derivative(oracle_exp, 0.0, 1e-4), "second-difference-of-inverse", 1e-4);

  {
    ThreePoint tp;
    double expectation = 0.0;
    for (int i = 0; i < 3; ++i) expectation += tp.u[i] * tp.p[i] * tp.mu[i];
    out["space.expectation.three_point"] =
        entry({{"p", {0.2, 0.3, 0.5}}, {"u", {1, 2, 3}}}, expectation, "direct-summation",
              1e-14);
    Vector centered = (tp.u.array() - expectation).matrix();
    out["space.center.three_point"] =
        entry({{"p", {0.2, 0.3, 0.5}}, {"u", {1, 2, 3}}}, to_json(centered),
              "direct-summation", 1e-14);
    double variance = 0.0;
    for (int i = 0; i < 3; ++i) variance += centered[i] * centered[i] * tp.p[i] * tp.mu[i];
    out["space.covariance.three_point"] =
        entry({{"p", {0.2, 0.3, 0.5}}, {"u", {1, 2, 3}}}, variance, "direct-summation", 1e-14);
    // Projection of the first indicator onto span{centered}: coefficient
    // E_p[t b]/E_p[b^2] by direct sums.
    double tb = 0.0;
    for (int i = 0; i < 3; ++i) tb += (i == 0 ? 1.0 : 0.0) * centered[i] * tp.p[i] * tp.mu[i];
    Vector projection = (tb / variance) * centered;
    out["space.projection.three_point"] =
        entry({{"target", {1, 0, 0}}, {"basis", "centered(1,2,3)"}}, to_json(projection),
              "gram-direct-solve", 1e-12);
  }

  // Two-point families on mu = (1/2, 1/2), p = (1, 1), H = (0, 1).
  const Vector two_mu = Vector::Constant(2, 0.5);
  const Vector two_p = Vector::Ones(2);
  const Vector two_H = (Vector(2) << 0.0, 1.0).finished();
  const double alpha_classical = std::log((1.0 + std::exp(2.0)) / 2.0);
  out["family.alpha.classical_two_point_theta2"] =
      entry({{"theta", 2.0}}, alpha_classical, "closed-form-log-partition", 1e-12);
  out["family.K.classical_two_point_theta2"] =
      entry({{"theta", 2.0}}, alpha_classical - 1.0, "closed-form-log-partition", 1e-12);

  const double alpha_kan =
      bisect_alpha(oracle_exp, two_H, two_p, two_mu, 2.0, 1e-14);
  out["family.alpha.kaniadakis_0p5_two_point_theta2"] =
      entry({{"kappa", 0.5}, {"theta", 2.0}}, alpha_kan, "bisection-on-quadrature-inverse",
            1e-11);
  {
    // Escort by brute force: phi(p_theta/p) p, normalized under mu.
    Vector weights(2);
    for (int i = 0; i < 2; ++i) weights[i] = oracle_phi(oracle_exp(2.0 * two_H[i] - alpha_kan));
    double normalizer = 0.0;
    for (int i = 0; i < 2; ++i) normalizer += weights[i] * two_p[i] * two_mu[i];
    Vector escort = (weights.array() * two_p.array() / normalizer).matrix();
    out["family.escort.kaniadakis_0p5_two_point_theta2"] =
        entry({{"kappa", 0.5}, {"theta", 2.0}}, to_json(escort), "pointwise-brute-force", 1e-9);
  }
  const double gibbs_mean = std::exp(2.0) / (1.0 + std::exp(2.0));
  out["family.dk.classical_two_point_theta2"] =
      entry({{"theta", 2.0}, {"v", "centered H"}}, gibbs_mean - 0.5,
            "closed-form-gibbs-mean", 1e-12);
  {
    // d2K(0, v, v) as a second difference of the bisected normalization.
    auto alpha_of_theta = [&](double theta) {
      return bisect_alpha([&](double u) { return kan.exp_phi(u); }, two_H, two_p, two_mu,
                          theta, 1e-14);
    };
    out["family.d2k.kaniadakis_0p5_two_point_u0"] =
        entry({{"kappa", 0.5}, {"h", cfg.fd_hessian_step}},
              fd_second_derivative(alpha_of_theta, 0.0, cfg.fd_hessian_step),
              "second-difference-of-alpha", 1e-6);
  }

  {
    // Hand solve for the segment [1, 3] separated from eta = 3.5: gap 0.5,
    // rescaled to the a.eta = a0 + 1 convention.
    ordered_json cert;
    cert["a"] = {2.0};
    cert["a0"] = 6.0;
    out["polytope.separation.segment_eta3p5"] =
        entry({{"vertices", {1, 2, 3}}, {"eta", 3.5}}, std::move(cert), "one-dimensional-hand-solve",
              1e-12);
  }
  // Centroid of the unit square: weights sum to 1 over four vertices, so the
  // min weight is at most 1/4, and 1/4 is attained by the uniform weights.
  out["polytope.interior_slack.square_centroid"] =
      entry({{"eta", {0.5, 0.5}}}, 0.25, "maximin-hand-argument", 1e-12);

  out["conjugate.alpha_star.classical_two_point_eta_sigmoid2"] =
      entry({{"eta", gibbs_mean}}, 2.0 * gibbs_mean - alpha_classical,
            "closed-form-legendre", 1e-10);
  {
    auto objective = [&](const Vector& theta) {
      const double a = bisect_alpha([&](double u) { return kan.exp_phi(u); }, two_H, two_p,
                                    two_mu, theta[0], 1e-14);
      return theta[0] * 0.7 - a;
    };
    const Vector lo = Vector::Constant(1, -8.0);
    const Vector hi = Vector::Constant(1, 8.0);
    const auto sup = grid_sup(objective, lo, hi, 0.05, 3);
    ordered_json value;
    value["value"] = sup.value;
    value["argmax"] = to_json(sup.argmax);
    out["conjugate.alpha_star.kaniadakis_0p5_two_point_eta0p7"] =
        entry({{"kappa", 0.5}, {"eta", 0.7}}, std::move(value), "grid-supremum", 1e-5);
  }
  out["conjugate.hv_eta.classical_two_point_qtheta2"] =
      entry({{"u_star", "q/p - 1, q = density(theta=2)"}}, gibbs_mean,
            "closed-form-gibbs-mean", 1e-12);

  return canonical_json(out);
}

}  // namespace defexp::oracle
