#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "weakkam/errors.hpp"

namespace weakkam {

struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n = 3;

  double dx() const { return (x_hi - x_lo) / (n - 1); }
  double node(int i) const { return x_lo + i * dx(); }

  Eigen::ArrayXd nodes() const {
    Eigen::ArrayXd xs(n);
    for (int i = 0; i < n; ++i) xs[i] = node(i);
    return xs;
  }

  void validate() const {
    if (n < 3 || !(x_hi > x_lo)) throw ConfigError("Grid1D: need n >= 3 and x_hi > x_lo");
  }

  // Linear interpolation with clamping to the grid range.
  double interp(const Eigen::ArrayXd& values, double x) const {
    double s = (x - x_lo) / dx();
    if (s <= 0.0) return values[0];
    if (s >= n - 1) return values[n - 1];
    int i = static_cast<int>(s);
    double w = s - i;
    return (1.0 - w) * values[i] + w * values[i + 1];
  }

  static Grid1D regular(double x_lo, double x_hi, int n) {
    Grid1D g{x_lo, x_hi, n};
    g.validate();
    return g;
  }

  // Grid covering [lo-margin, hi+margin] at the given spacing; bounds snap
  // outward to multiples of dx so that integers stay on the grid.
  static Grid1D with_margin(double lo, double hi, double margin, double dx) {
    double a = std::floor((lo - margin) / dx) * dx;
    double b = std::ceil((hi + margin) / dx) * dx;
    int n = static_cast<int>(std::round((b - a) / dx)) + 1;
    return regular(a, b, n);
  }
};

}  // namespace weakkam
