#pragma once

#include "defexp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace defexp::detail {

// Fritsch-Carlson monotone cubic interpolation. The interpolant never
// overshoots the local data range, so a strictly positive table stays
// strictly positive. Outside the knot range it extrapolates by the boundary
// values (derivative zero).
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 2 || y_.size() != x_.size()) {
      fail(errc::validation, "psi_table needs at least two aligned (u, psi) samples");
    }
    for (int i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) {
        fail(errc::validation, "psi_table.u must be strictly increasing",
             "psi_table.u[" + std::to_string(i) + "]");
      }
    }
    slopes_.resize(n);
    std::vector<double> delta(n - 1);
    for (int i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    slopes_[0] = delta[0];
    slopes_[n - 1] = delta[n - 2];
    for (int i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slopes_[i] = 0.0;
      } else {
        // Weighted harmonic mean keeps the interpolant monotone on each cell.
        const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
        const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
        slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // Clamp the one-sided boundary slopes (Fritsch-Carlson condition).
    for (int i : {0, n - 1}) {
      const double d = delta[i == 0 ? 0 : n - 2];
      if (d == 0.0) slopes_[i] = 0.0;
      else if (slopes_[i] / d < 0.0) slopes_[i] = 0.0;
      else if (std::abs(slopes_[i]) > 3.0 * std::abs(d)) slopes_[i] = 3.0 * d;
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const int i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * slopes_[i] + h01 * y_[i + 1] + h11 * h * slopes_[i + 1];
  }

  double derivative(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const int i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double dh00 = (6 * t2 - 6 * t) / h, dh10 = 3 * t2 - 4 * t + 1;
    const double dh01 = (-6 * t2 + 6 * t) / h, dh11 = 3 * t2 - 2 * t;
    return dh00 * y_[i] + dh10 * slopes_[i] + dh01 * y_[i + 1] + dh11 * slopes_[i + 1];
  }

  const std::vector<double>& knots() const noexcept { return x_; }
  const std::vector<double>& values() const noexcept { return y_; }

 private:
  int cell(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  }

  std::vector<double> x_, y_, slopes_;
};

}  // namespace defexp::detail
