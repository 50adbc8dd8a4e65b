#include "defexp/oracle.hpp"

#include "defexp/errors.hpp"

#include <cmath>
#include <limits>
#include <stack>

namespace defexp::oracle {

namespace {

// Iterative adaptive Simpson, written independently of the library's
// recursive integrator (no shared code with the paths it adjudicates).
double simpson_slice(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double abs_tol) {
  struct Slice {
    double a, b, fa, fm, fb, whole, tol;
    int depth;
  };
  const double m0 = 0.5 * (a + b);
  std::stack<Slice> work;
  work.push({a, b, f(a), f(m0), f(b), simpson_slice(a, b, f(a), f(m0), f(b)), abs_tol, 0});
  double total = 0.0;
  long evaluations = 0;
  while (!work.empty()) {
    const Slice s = work.top();
    work.pop();
    const double m = 0.5 * (s.a + s.b);
    const double lm = 0.5 * (s.a + m), rm = 0.5 * (m + s.b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_slice(s.a, m, s.fa, flm, s.fm);
    const double right = simpson_slice(m, s.b, s.fm, frm, s.fb);
    const double delta = left + right - s.whole;
    const double floor_tol =
        4.0 * std::numeric_limits<double>::epsilon() * std::abs(left + right);
    if (std::abs(delta) <= 15.0 * std::max(s.tol, floor_tol) || s.depth >= 60) {
      total += left + right + delta / 15.0;
    } else {
      work.push({s.a, m, s.fa, flm, s.fm, left, 0.5 * s.tol, s.depth + 1});
      work.push({m, s.b, s.fm, frm, s.fb, right, 0.5 * s.tol, s.depth + 1});
    }
    if (++evaluations > 4'000'000) {
      fail(errc::quadrature, "oracle quadrature exceeded its evaluation budget");
    }
  }
  return total;
}

}  // namespace

double quad_ln_phi(const Deformation& d, double v, double abs_tol) {
  if (!(v > 0.0)) fail(errc::domain, "quad_ln_phi requires v > 0");
  if (v == 1.0) return 0.0;
  auto integrand = [&](double y) { return 1.0 / d.phi(y); };
  if (v > 1.0) return adaptive_integral(integrand, 1.0, v, abs_tol);
  return -adaptive_integral(integrand, v, 1.0, abs_tol);
}

double invert_ln_phi(const Deformation& d, double u, double abs_tol) {
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (quad_ln_phi(d, hi, abs_tol) < u) {
    hi *= 2.0;
    if (++guard > 2000) fail(errc::numerical, "oracle inversion bracket overflow");
  }
  guard = 0;
  while (quad_ln_phi(d, lo, abs_tol) > u) {
    lo *= 0.5;
    if (++guard > 2000) fail(errc::numerical, "oracle inversion bracket underflow");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (quad_ln_phi(d, mid, abs_tol) < u) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double bisect_alpha(const std::function<double(double)>& exp_fn, const Vector& statistic_values,
                    const Vector& p, const Vector& mu, double theta, double bracket_eps) {
  auto residual = [&](double a) {
    double sum = 0.0;
    for (int i = 0; i < statistic_values.size(); ++i) {
      sum += exp_fn(theta * statistic_values[i] - a) * p[i] * mu[i];
    }
    return sum - 1.0;
  };
  double lo = (theta * statistic_values.array()).minCoeff();
  double hi = (theta * statistic_values.array()).maxCoeff();
  if (lo == hi) return lo;
  while (hi - lo > bracket_eps) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd_second_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  Vector grad(x.size());
  Vector probe = x;
  for (int i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

Matrix fd_hessian(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
  const int n = static_cast<int>(x.size());
  Matrix hess(n, n);
  Vector probe = x;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      probe = x;
      probe[i] += h;
      probe[j] += h;
      const double pp = f(probe);
      probe = x;
      probe[i] += h;
      probe[j] -= h;
      const double pm = f(probe);
      probe = x;
      probe[i] -= h;
      probe[j] += h;
      const double mp = f(probe);
      probe = x;
      probe[i] -= h;
      probe[j] -= h;
      const double mm = f(probe);
      hess(i, j) = hess(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  return hess;
}

GridSupResult grid_sup(const std::function<double(const Vector&)>& g, const Vector& lo,
                       const Vector& hi, double coarse_step, int refine_rounds) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    fail(errc::validation, "grid_sup needs matching nonempty bounds");
  }
  const int dim = static_cast<int>(lo.size());
  Vector box_lo = lo, box_hi = hi;
  double step = coarse_step;
  GridSupResult best{-std::numeric_limits<double>::infinity(), Vector::Zero(dim)};
  for (int round = 0; round <= refine_rounds; ++round) {
    std::vector<int> counts(dim);
    for (int k = 0; k < dim; ++k) {
      counts[k] = std::max(1, static_cast<int>(std::floor((box_hi[k] - box_lo[k]) / step))) + 1;
    }
    std::vector<int> idx(dim, 0);
    Vector point(dim);
    while (true) {
      for (int k = 0; k < dim; ++k) {
        point[k] = std::min(box_lo[k] + idx[k] * step, box_hi[k]);
      }
      const double value = g(point);
      if (value > best.value) {
        best.value = value;
        best.argmax = point;
      }
      int k = 0;
      while (k < dim) {
        if (++idx[k] < counts[k]) break;
        idx[k] = 0;
        ++k;
      }
      if (k == dim) break;
    }
    // Shrink the box to one coarse cell around the incumbent and refine 10x.
    for (int k = 0; k < dim; ++k) {
      box_lo[k] = std::max(lo[k], best.argmax[k] - step);
      box_hi[k] = std::min(hi[k], best.argmax[k] + step);
    }
    step /= 10.0;
  }
  return best;
}

namespace {

// Grid feasibility for the last two vertices in closed form: the set of tick
// counts t (weight t/ticks on the first of the two) whose residual stays
// within tol is an intersection of per-coordinate intervals, so "some grid
// point matches" reduces to an integer-interval emptiness check. This keeps
// the answer identical to the full enumeration.
bool final_pair_feasible(const Matrix& vertices, const Vector& eta, const Vector& partial,
                         int level, int remaining_ticks, int ticks, double tol) {
  const Vector& a = vertices.col(level);
  const Vector b = vertices.col(level + 1);
  const double mass = static_cast<double>(remaining_ticks) / ticks;
  double lo = 0.0;
  double hi = static_cast<double>(remaining_ticks);
  for (int k = 0; k < eta.size(); ++k) {
    const double direction = (a[k] - b[k]) / ticks;
    const double target = eta[k] - partial[k] - mass * b[k];
    if (std::abs(direction) < 1e-300) {
      if (std::abs(target) > tol) return false;
      continue;
    }
    double t_lo = (target - tol) / direction;
    double t_hi = (target + tol) / direction;
    if (t_lo > t_hi) std::swap(t_lo, t_hi);
    lo = std::max(lo, t_lo);
    hi = std::min(hi, t_hi);
    if (lo > hi) return false;
  }
  return std::ceil(lo - 1e-9) <= std::floor(hi + 1e-9);
}

// Depth-first scan over the lambda grid with a per-level reachability prune:
// if eta minus the committed part cannot be written with the remaining mass
// over the bounding box of the remaining vertices, no grid point below this
// node can match, so the subtree is skipped without changing the answer.
bool scan_weights(const Matrix& vertices, const Vector& eta, int level, int remaining_ticks,
                  int ticks, const Vector& partial, double tol) {
  const int nv = static_cast<int>(vertices.cols());
  const int dim = static_cast<int>(vertices.rows());
  const double mass = static_cast<double>(remaining_ticks) / ticks;
  for (int k = 0; k < dim; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int v = level; v < nv; ++v) {
      lo = std::min(lo, vertices(k, v));
      hi = std::max(hi, vertices(k, v));
    }
    const double need = eta[k] - partial[k];
    if (need < mass * lo - tol || need > mass * hi + tol) return false;
  }
  if (level == nv - 1) {
    return ((partial + mass * vertices.col(level)) - eta).cwiseAbs().maxCoeff() <= tol;
  }
  if (level == nv - 2) {
    return final_pair_feasible(vertices, eta, partial, level, remaining_ticks, ticks, tol);
  }
  for (int t = 0; t <= remaining_ticks; ++t) {
    const double w = static_cast<double>(t) / ticks;
    if (scan_weights(vertices, eta, level + 1, remaining_ticks - t, ticks,
                     partial + w * vertices.col(level), tol)) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool simplex_grid_member(const Matrix& vertices, const Vector& eta, double step, double tol) {
  if (vertices.cols() < 1 || vertices.rows() != eta.size()) {
    fail(errc::validation, "simplex_grid_member shape mismatch");
  }
  const int ticks = std::max(1, static_cast<int>(std::llround(1.0 / step)));
  return scan_weights(vertices, eta, 0, ticks, ticks, Vector::Zero(eta.size()), tol);
}

}  // namespace defexp::oracle
