#include "weakkam/semidistance.hpp"

#include <cmath>

namespace weakkam {

double semidistance_eval(const Semidistance& s, double y, double x) {
  if (y == x) return 0.0;
  const HamiltonianSpec& spec = *s.spec;
  const double a = s.level;
  const Which which = s.which;
  if (y <= x) {
    return integrate_adaptive(
        [&](double z) { return sublevel_bracket(spec, z, a, which).p_plus; }, y, x, 1e-11, 32);
  }
  return integrate_adaptive(
      [&](double z) { return -sublevel_bracket(spec, z, a, which).p_minus; }, x, y, 1e-11, 32);
}

SemidistanceCache::SemidistanceCache(const HamiltonianSpec& spec, Which which, double level,
                                     double lo, double hi, int per_unit)
    : lo_(lo), hi_(hi), level_(level) {
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) * per_unit)));
  dx_ = (hi - lo) / n;
  cplus_.resize(n + 1);
  cminus_.resize(n + 1);
  cplus_[0] = 0.0;
  cminus_[0] = 0.0;
  double x0 = lo;
  SublevelBracket b0 = sublevel_bracket(spec, x0, level, which);
  for (int i = 0; i < n; ++i) {
    double x1 = lo + (i + 1) * dx_;
    double xm = x0 + 0.5 * dx_;
    SublevelBracket bm = sublevel_bracket(spec, xm, level, which);
    SublevelBracket b1 = sublevel_bracket(spec, x1, level, which);
    cplus_[i + 1] = cplus_[i] + dx_ / 6.0 * (b0.p_plus + 4.0 * bm.p_plus + b1.p_plus);
    cminus_[i + 1] = cminus_[i] + dx_ / 6.0 * (b0.p_minus + 4.0 * bm.p_minus + b1.p_minus);
    b0 = b1;
    x0 = x1;
  }
}

double SemidistanceCache::interp(const Eigen::ArrayXd& c, double x) const {
  double s = (x - lo_) / dx_;
  Eigen::Index i = static_cast<Eigen::Index>(std::floor(s));
  if (i < 0) i = 0;
  if (i >= c.size() - 1) i = c.size() - 2;
  double w = s - static_cast<double>(i);
  return (1.0 - w) * c[i] + w * c[i + 1];
}

double SemidistanceCache::cum_plus(double x) const { return interp(cplus_, x); }
double SemidistanceCache::cum_minus(double x) const { return interp(cminus_, x); }

double SemidistanceCache::operator()(double y, double x) const {
  if (y <= x) return cum_plus(x) - cum_plus(y);
  return -(cum_minus(y) - cum_minus(x));
}

}  // namespace weakkam
