#pragma once

#include "defexp/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace defexp::detail {

// Safeguarded Newton on a monotone decreasing residual f over [lo, hi] with
// f(lo) >= 0 >= f(hi). Newton steps that leave the bracket, or that are not
// finite (overflowing exponentials at the bracket ends), fall back to
// bisection; the bracket shrinks every iteration. Stops on |f| <= tol, with a
// floor at the residual resolvable for arguments of this magnitude (one ulp
// of x moves f by about eps * |x| * |f'|, so tolerances below that cannot be
// met in doubles).
//
// If the iteration cap is reached the bracket is bisected down to width
// ~1e-14 before giving up with errc::numerical.
template <typename F, typename DF>
double newton_decreasing(F&& f, DF&& df, double lo, double hi, double tol, int max_iter,
                         const char* what) {
  if (!(lo <= hi)) fail(errc::numerical, std::string(what) + ": invalid bracket");
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * scale);
  double x = 0.5 * (lo + hi);
  if (lo == hi) x = lo;
  double fx = f(x);
  for (int it = 0; it < max_iter; ++it) {
    if (std::isfinite(fx) && std::abs(fx) <= tol) return x;
    if (std::isfinite(fx)) {
      if (fx > 0.0) lo = x; else hi = x;
    } else {
      // Non-finite residual: the root lies on the bounded side of the bracket.
      if (std::isnan(fx) || fx > 0.0) lo = x; else hi = x;
    }
    double next = std::numeric_limits<double>::quiet_NaN();
    const double d = df(x);
    if (std::isfinite(fx) && std::isfinite(d) && d != 0.0) next = x - fx / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
    fx = f(x);
  }
  // Exhaustive bisection before declaring failure.
  const double width_floor =
      std::max(1e-14, 8.0 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(lo), std::abs(hi)));
  while (hi - lo > width_floor) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::isfinite(fm) && std::abs(fm) <= tol) return mid;
    if (std::isnan(fm) || fm > 0.0) lo = mid; else hi = mid;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(f(mid)) <= tol) return mid;
  fail(errc::numerical, std::string(what) + ": residual tolerance not met");
}

// Expands a multiplicative bracket [lo, hi] around 1 until g(lo) <= target <=
// g(hi) for increasing g. Used to invert deformed logarithms, whose range is
// the whole real line.
template <typename G>
void expand_positive_bracket(G&& g, double target, double& lo, double& hi, const char* what) {
  lo = 1.0;
  hi = 1.0;
  int guard = 0;
  while (g(hi) < target) {
    hi *= 2.0;
    if (++guard > 4000 || !std::isfinite(hi)) {
      fail(errc::numerical, std::string(what) + ": bracket expansion overflowed");
    }
  }
  guard = 0;
  while (g(lo) > target) {
    lo *= 0.5;
    if (++guard > 4000 || lo == 0.0) {
      fail(errc::numerical, std::string(what) + ": bracket expansion underflowed");
    }
  }
}

// Same idea on an additive bracket around 0, for increasing g defined on the
// whole line.
template <typename G>
void expand_real_bracket(G&& g, double target, double& lo, double& hi, const char* what) {
  lo = -1.0;
  hi = 1.0;
  int guard = 0;
  while (g(hi) < target) {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi)) {
      fail(errc::numerical, std::string(what) + ": bracket expansion overflowed");
    }
  }
  guard = 0;
  while (g(lo) > target) {
    lo *= 2.0;
    if (++guard > 2000 || !std::isfinite(lo)) {
      fail(errc::numerical, std::string(what) + ": bracket expansion overflowed");
    }
  }
}

}  // namespace defexp::detail
