#pragma once

#include "defexp/errors.hpp"

#include <cmath>
#include <limits>

namespace defexp::detail {

// Adaptive Simpson with an absolute tolerance and a machine-precision relative
// floor (a tolerance below ~4 eps of the running value cannot be met in
// doubles). Throws errc::quadrature when the subdivision budget runs out.
template <typename F>
class AdaptiveSimpson {
 public:
  AdaptiveSimpson(F f, double abs_tol, int max_subdivisions)
      : f_(std::move(f)), abs_tol_(abs_tol), budget_(max_subdivisions) {}

  double integrate(double a, double b) {
    if (a == b) return 0.0;
    const double fa = f_(a), fb = f_(b);
    const double m = 0.5 * (a + b);
    const double fm = f_(m);
    const double whole = simpson(a, b, fa, fm, fb);
    return recurse(a, b, fa, fm, fb, whole, abs_tol_, kMaxDepth);
  }

 private:
  static constexpr int kMaxDepth = 60;

  static double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f_(lm), frm = f_(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    const double floor_tol =
        4.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
    if (std::abs(delta) <= 15.0 * std::max(tol, floor_tol) || !std::isfinite(delta)) {
      return left + right + delta / 15.0;
    }
    if (depth <= 0 || budget_ <= 0) {
      fail(errc::quadrature, "adaptive quadrature did not reach tolerance within the "
                             "subdivision budget");
    }
    budget_ -= 2;
    const double half_tol = 0.5 * tol;
    return recurse(a, m, fa, flm, fm, left, half_tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, half_tol, depth - 1);
  }

  F f_;
  double abs_tol_;
  int budget_;
};

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_subdivisions) {
  AdaptiveSimpson<std::decay_t<F>> integrator(std::forward<F>(f), abs_tol, max_subdivisions);
  return integrator.integrate(a, b);
}

}  // namespace defexp::detail
