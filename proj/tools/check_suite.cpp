#include "check_suite.hpp"

#include <defexp/conjugate.hpp>
#include <defexp/family.hpp>
#include <defexp/oracle.hpp>
#include <defexp/polytope.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace defexp::cli {

namespace {

PhiExponentialFamily fixture_family(const Deformation& d) {
  SampleSpace space({"a", "b", "c", "d"}, (Vector(4) << 0.5, 1.0, 1.5, 1.0).finished());
  Vector p(4);
  p << 0.4, 0.3, 0.2, 0.35;
  p /= p.dot(space.mu());
  Matrix H(2, 4);
  H << 0.0, 1.0, 0.5, -0.5,
       1.0, -1.0, 2.0, 0.0;
  return PhiExponentialFamily(d, space, space.density(p), H);
}

std::vector<Deformation> builtin_deformations() {
  return {Deformation::classical(), Deformation::kaniadakis(0.25),
          Deformation::kaniadakis(0.5), Deformation::kaniadakis(0.9)};
}

}  // namespace

std::vector<CheckGroup> run_check_suite(std::uint64_t seed) {
  std::vector<CheckGroup> groups;

  {
    CheckGroup g{"deformation.rate_identity", true, 0.0, 0};
    for (double kappa : {0.25, 0.5, 0.9}) {
      const auto d = Deformation::kaniadakis(kappa);
      for (int i = 0; i < 100; ++i) {
        const double v = std::pow(10.0, -2.0 + 4.0 * i / 99.0);
        g.max_residual =
            std::max(g.max_residual, std::abs(d.psi(d.ln_phi(v)) - d.phi(v) / v));
        ++g.count;
      }
    }
    g.pass = g.max_residual <= 1e-9;
    groups.push_back(g);
  }

  {
    CheckGroup g{"deformation.roundtrip", true, 0.0, 0};
    for (const auto& d : builtin_deformations()) {
      for (int i = 0; i < 50; ++i) {
        const double v = std::pow(10.0, -4.0 + 8.0 * i / 49.0);
        g.max_residual =
            std::max(g.max_residual, std::abs(d.exp_phi(d.ln_phi(v)) - v) / v);
        ++g.count;
      }
    }
    g.pass = g.max_residual <= 1e-9;
    groups.push_back(g);
  }

  {
    CheckGroup g{"deformation.self_duality", true, 0.0, 0};
    for (double kappa : {0.25, 0.5, 0.9}) {
      std::vector<double> grid;
      for (int i = 0; i <= 40; ++i) grid.push_back(-10.0 + 0.5 * i);
      const auto report = Deformation::kaniadakis(kappa).is_self_dual(grid, 1e-10);
      g.max_residual = std::max(g.max_residual, report.max_deviation);
      g.count += static_cast<int>(grid.size());
    }
    g.pass = g.max_residual <= 1e-10;
    groups.push_back(g);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta_dist(-2.0, 2.0);

  {
    CheckGroup g{"family.normalization", true, 0.0, 0};
    for (const auto& d : builtin_deformations()) {
      const auto fam = fixture_family(d);
      for (int i = 0; i < 25; ++i) {
        Vector theta(2);
        theta << theta_dist(rng), theta_dist(rng);
        const Density q = fam.density(theta);
        g.max_residual =
            std::max(g.max_residual, std::abs(q.values.dot(fam.space().mu()) - 1.0));
        ++g.count;
      }
    }
    g.pass = g.max_residual <= 1e-12;
    groups.push_back(g);
  }

  {
    CheckGroup g{"family.gradient_check", true, 0.0, 0};
    const auto fam = fixture_family(Deformation::kaniadakis(0.5));
    std::normal_distribution<double> dir(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      Vector theta(2);
      theta << theta_dist(rng), theta_dist(rng);
      const Vector u = fam.centered_basis().transpose() * theta;
      Vector v(fam.points());
      for (int k = 0; k < v.size(); ++k) v[k] = dir(rng);
      const double h = 1e-5;
      const double fd = (fam.K(u + h * v) - fam.K(u - h * v)) / (2.0 * h);
      const double exact = fam.dK(u, v);
      g.max_residual = std::max(g.max_residual, std::abs(exact - fd) / (1.0 + std::abs(exact)));
      ++g.count;
    }
    g.pass = g.max_residual <= 1e-6;
    groups.push_back(g);
  }

  {
    CheckGroup g{"family.hessian_check", true, 0.0, 0};
    const auto fam = fixture_family(Deformation::kaniadakis(0.25));
    std::normal_distribution<double> dir(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      Vector theta(2);
      theta << theta_dist(rng), theta_dist(rng);
      const Vector u = fam.centered_basis().transpose() * theta;
      Vector v(fam.points()), w(fam.points());
      for (int k = 0; k < v.size(); ++k) v[k] = dir(rng);
      for (int k = 0; k < w.size(); ++k) w[k] = dir(rng);
      const double h = 1e-3;
      const double fd = (fam.K(u + h * v + h * w) - fam.K(u + h * v - h * w) -
                         fam.K(u - h * v + h * w) + fam.K(u - h * v - h * w)) /
                        (4.0 * h * h);
      const double exact = fam.d2K(u, v, w);
      g.max_residual = std::max(g.max_residual, std::abs(exact - fd) / (1.0 + std::abs(exact)));
      ++g.count;
    }
    g.pass = g.max_residual <= 1e-4;
    groups.push_back(g);
  }

  {
    CheckGroup g{"polytope.certificates", true, 0.0, 0};
    const auto fam = fixture_family(Deformation::classical());
    const auto polytope = MarginalPolytope::build(fam.statistics());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vector centroid = polytope.vertices().rowwise().mean();
    double max_radius = 0.0;
    for (int k = 0; k < polytope.vertex_count(); ++k) {
      max_radius = std::max(max_radius, (polytope.vertices().col(k) - centroid).norm());
    }
    for (int i = 0; i < 40; ++i) {
      Vector weights(polytope.vertex_count());
      for (int k = 0; k < weights.size(); ++k) weights[k] = unit(rng);
      weights /= weights.sum();
      const bool inside = i % 2 == 0;
      Vector eta = polytope.vertices() * weights;
      if (!inside) {
        Vector dir = polytope.vertices().col(i % polytope.vertex_count()) - centroid;
        if (dir.norm() < 1e-12) dir = Vector::Ones(eta.size());
        eta = centroid + dir.normalized() * (3.0 * max_radius + 1.0);
      }
      const auto cert = polytope.contains(eta);
      if (is_member(cert)) {
        const auto& lambda = std::get<BarycentricWeights>(cert).lambda;
        g.max_residual = std::max(
            g.max_residual,
            (polytope.vertices() * lambda - eta).cwiseAbs().maxCoeff());
      } else {
        const auto& sep = std::get<SeparationCertificate>(cert);
        const double worst =
            (polytope.vertices().transpose() * sep.a).maxCoeff() - sep.a0;
        const double at_eta = std::abs(sep.a.dot(eta) - sep.a0 - 1.0);
        g.max_residual = std::max({g.max_residual, worst, at_eta});
      }
      ++g.count;
    }
    g.pass = g.max_residual <= 1e-8;
    groups.push_back(g);
  }

  {
    CheckGroup g{"conjugate.legendre_roundtrip", true, 0.0, 0};
    for (const auto& d : builtin_deformations()) {
      const auto fam = fixture_family(d);
      for (int i = 0; i < 5; ++i) {
        Vector theta(2);
        theta << theta_dist(rng), theta_dist(rng);
        const auto report = legendre_check(fam, theta);
        g.max_residual = std::max(
            {g.max_residual, report.value_residual,
             report.reduced_coordinates ? 0.0 : report.theta_residual});
        g.pass = g.pass && report.ok;
        ++g.count;
      }
    }
    groups.push_back(g);
  }

  std::sort(groups.begin(), groups.end(),
            [](const CheckGroup& a, const CheckGroup& b) { return a.name < b.name; });
  return groups;
}

}  // namespace defexp::cli
