#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <utility>

namespace weakkam {

// Sentinel for +infinity values of the Fenchel transform. Consumers treat
// anything above kLagrangianInf / 2 as inadmissible.
inline constexpr double kLagrangianInf = 1e9;

inline constexpr double kGoldenRatio = 0.6180339887498949;

struct ScalarOpt {
  double x;
  double value;
};

// Golden-section maximization of a concave (possibly kinked) function on
// [lo, hi]. Interval tolerance tol_x, hard iteration cap.
template <typename F>
ScalarOpt golden_max(F&& f, double lo, double hi, double tol_x = 1e-12, int max_iter = 200) {
  double a = lo, b = hi;
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > tol_x; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

template <typename F>
ScalarOpt golden_min(F&& f, double lo, double hi, double tol_x = 1e-12, int max_iter = 200) {
  auto r = golden_max([&](double x) { return -f(x); }, lo, hi, tol_x, max_iter);
  return {r.x, -r.value};
}

// Bisection for f(x) = target with f monotone between lo and hi.
// Returns x with |interval| <= tol_x. Assumes sign(f(lo)-target) != sign(f(hi)-target).
template <typename F>
double bisect(F&& f, double lo, double hi, double target, double tol_x = 1e-11, int max_iter = 200) {
  double flo = f(lo) - target;
  for (int it = 0; it < max_iter && (hi - lo) > tol_x; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid) - target;
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {
template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature with absolute tolerance.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-11, int max_depth = 40) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Solves a tridiagonal system (Thomas algorithm). Diagonal dominance assumed.
// lower[i] multiplies x[i-1], diag[i] x[i], upper[i] x[i+1].
Eigen::ArrayXd solve_tridiagonal(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                                 const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs);

// Cyclic variant (corner entries couple first and last unknowns) via
// Sherman-Morrison on top of the plain Thomas solve.
Eigen::ArrayXd solve_cyclic_tridiagonal(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                                        const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs);

// Linear interpolation of periodic nodal values on [0,1), n nodes at i/n.
double interp_periodic(const Eigen::ArrayXd& values, double x);

}  // namespace weakkam
