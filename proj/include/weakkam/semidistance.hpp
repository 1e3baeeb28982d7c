#pragma once

#include <Eigen/Dense>
#include <memory>

#include "weakkam/sublevel.hpp"

namespace weakkam {

// Intrinsic semidistance S_a(y, x) at a fixed level: integral of p_plus
// forward, of -p_minus backward. In 1D the两 triangle inequality is an exact
// additivity, which the cached cumulative form exploits.
struct Semidistance {
  const HamiltonianSpec* spec;
  Which which;
  double level;
};

// Direct adaptive-Simpson evaluation (the operation contract).
double semidistance_eval(const Semidistance& s, double y, double x);

// Cumulative-integral cache over [lo, hi] at `per_unit` samples per unit,
// per-cell Simpson. Exact 1D additivity makes S(y,x) a difference of
// cumulatives.
class SemidistanceCache {
 public:
  SemidistanceCache(const HamiltonianSpec& spec, Which which, double level, double lo, double hi,
                    int per_unit = 4096);

  double operator()(double y, double x) const;
  double level() const { return level_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Cumulative integrals of p_plus and of p_minus from lo.
  double cum_plus(double x) const;
  double cum_minus(double x) const;

 private:
  double lo_, hi_, level_;
  double dx_;
  Eigen::ArrayXd cplus_;   // cumulative of p_plus at nodes
  Eigen::ArrayXd cminus_;  // cumulative of p_minus at nodes
  double interp(const Eigen::ArrayXd& c, double x) const;
};

}  // namespace weakkam
