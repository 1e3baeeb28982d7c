#include "weakkam/numerics.hpp"

#include <cassert>

namespace weakkam {

Eigen::ArrayXd solve_tridiagonal(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                                 const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::ArrayXd c(n), d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    double m = diag[i] - lower[i] * c[i - 1];
    c[i] = (i + 1 < n) ? upper[i] / m : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
  }
  Eigen::ArrayXd x(n);
  x[n - 1] = d[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

Eigen::ArrayXd solve_cyclic_tridiagonal(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                                        const Eigen::ArrayXd& upper, const Eigen::ArrayXd& rhs) {
  const Eigen::Index n = diag.size();
  assert(n >= 3);
  // Corner entries: lower[0] couples x[n-1], upper[n-1] couples x[0].
  const double alpha = lower[0];
  const double beta = upper[n - 1];
  if (alpha == 0.0 && beta == 0.0) return solve_tridiagonal(lower, diag, upper, rhs);
  const double gamma = -diag[0];
  Eigen::ArrayXd dmod = diag;
  dmod[0] -= gamma;
  dmod[n - 1] -= alpha * beta / gamma;
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(n);
  u[0] = gamma;
  u[n - 1] = beta;
  Eigen::ArrayXd lo = lower, up = upper;
  lo[0] = 0.0;
  up[n - 1] = 0.0;
  Eigen::ArrayXd y = solve_tridiagonal(lo, dmod, up, rhs);
  Eigen::ArrayXd z = solve_tridiagonal(lo, dmod, up, u);
  double fact = (y[0] + alpha * y[n - 1] / gamma) / (1.0 + z[0] + alpha * z[n - 1] / gamma);
  return y - fact * z;
}

double interp_periodic(const Eigen::ArrayXd& values, double x) {
  const Eigen::Index n = values.size();
  double t = x - std::floor(x);
  double s = t * static_cast<double>(n);
  Eigen::Index i = static_cast<Eigen::Index>(s);
  if (i >= n) i = 0;
  double w = s - static_cast<double>(i);
  Eigen::Index j = (i + 1 == n) ? 0 : i + 1;
  return (1.0 - w) * values[i] + w * values[j];
}

}  // namespace weakkam
