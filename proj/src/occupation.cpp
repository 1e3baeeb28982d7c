#include "weakkam/occupation.hpp"

#include <cmath>
#include <limits>

namespace weakkam {

double OccupationMeasure::total() const {
  double s = 0.0;
  for (double wi : w) s += wi;
  return s;
}

double OccupationMeasure::integrate(const std::function<double(double, double)>& f) const {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * f(y[i], q[i]);
  return s;
}

namespace {

// One-step DPP value and argmin velocity at an arbitrary point, reading grid
// values inside the domain and the torus companion outside.
struct WalkContext {
  const DiscountedSolution* sol;
  double qmax;
  int refine;

  bool in_grid(double y) const { return y >= sol->grid.x_lo && y <= sol->grid.x_hi; }

  double value(double y) const {
    if (in_grid(y)) return sol->value_at(y);
    return sol->torus->value_at(y);
  }

  double running_cost(double y, int j) const {
    if (in_grid(y)) return sol->table->line_at(y, j);
    return sol->table->torus_at(y, j);
  }

  double running_cost_q(double y, double q) const {
    if (in_grid(y)) return sol->table->line_q(y, q);
    return sol->table->torus_q(y, q);
  }

  bool admissible_foot(double y) const {
    if (in_grid(y)) return true;
    return sol->torus != nullptr;
  }

  // Returns {q*, dpp value at y}.
  std::pair<double, double> step(double y) const {
    const Eigen::ArrayXd& qs = sol->table->qs;
    const double h = sol->h;
    const double disc = 1.0 - sol->lambda * h;
    double best = 1e300, bestq = 0.0;
    int best_j = -1;
    for (int j = 0; j < qs.size(); ++j) {
      double foot = y - h * qs[j];
      if (!admissible_foot(foot)) continue;
      double Lv = running_cost(y, j);
      if (Lv >= kLagrangianInf / 2.0) continue;
      double val = disc * value(foot) + h * (Lv + sol->level);
      if (val < best) {
        best = val;
        bestq = qs[j];
        best_j = j;
      }
    }
    if (best_j < 0) throw InternalError("walk found no admissible velocity");
    if (refine > 0) {
      double lo = best_j > 0 ? qs[best_j - 1] : qs[0];
      double hi = best_j + 1 < qs.size() ? qs[best_j + 1] : qs[qs.size() - 1];
      auto phi = [&](double q) {
        double foot = y - h * q;
        if (!admissible_foot(foot)) return 1e300;
        double Lv = running_cost_q(y, q);
        if (Lv >= kLagrangianInf / 2.0) return 1e300;
        return disc * value(foot) + h * (Lv + sol->level);
      };
      ScalarOpt r = golden_min(phi, lo, hi, 1e-10, refine);
      if (r.value < best) {
        best = r.value;
        bestq = r.x;
      }
    }
    return {bestq, best};
  }
};

}  // namespace

Trajectory extract_optimal_curve(const DiscountedSolution& sol, double x0,
                                 const OccupationConfig& config) {
  if (x0 <= sol.grid.x_lo || x0 >= sol.grid.x_hi)
    throw DomainError("x0 must lie in the grid interior");
  Trajectory traj;
  traj.x0 = x0;
  traj.lambda = sol.lambda;
  traj.h = sol.h;

  const double h = sol.h;
  const double lambda = sol.lambda;
  const long k_max = static_cast<long>(std::ceil(-std::log(config.mass_tol) / (lambda * h)));
  traj.samples.reserve(std::min<long>(k_max, 1 << 22));

  WalkContext ctx{&sol, sol.table->qs[sol.table->qs.size() - 1], config.refine_iterations};
  const double margin = h * ctx.qmax;

  double y = x0;
  for (long k = 0; k < k_max; ++k) {
    bool have_torus = sol.torus != nullptr;
    if (!have_torus && (y < sol.grid.x_lo + margin || y > sol.grid.x_hi - margin)) {
      traj.truncated = true;
      break;
    }
    auto [q, val] = ctx.step(y);
    // One-step dynamic programming defect at the current point.
    traj.dpp_residual_max = std::max(traj.dpp_residual_max, std::abs(val - ctx.value(y)));
    traj.samples.push_back({-static_cast<double>(k) * h, y, q});
    y -= h * q;
    traj.horizon = (k + 1) * h;
  }
  return traj;
}

OccupationMeasure occupation_measure(const Trajectory& traj) {
  OccupationMeasure mu;
  mu.x0 = traj.x0;
  mu.lambda = traj.lambda;
  const double lambda = traj.lambda, h = traj.h;
  mu.y.reserve(traj.samples.size());
  mu.q.reserve(traj.samples.size());
  mu.w.reserve(traj.samples.size());
  double total = 0.0;
  for (size_t k = 0; k < traj.samples.size(); ++k) {
    double w = lambda * h * std::exp(-lambda * static_cast<double>(k) * h);
    mu.y.push_back(traj.samples[k].y);
    mu.q.push_back(traj.samples[k].q);
    mu.w.push_back(w);
    total += w;
  }
  for (double& w : mu.w) w /= total;
  return mu;
}

MeasureSplit split_at_radius(const Trajectory& traj, double r) {
  MeasureSplit split;
  split.r = r;
  if (std::abs(traj.x0) > r)
    throw DomainError("split radius must cover the starting point");

  const double lambda = traj.lambda, h = traj.h;
  long k_exit = -1;
  for (size_t k = 0; k < traj.samples.size(); ++k) {
    if (std::abs(traj.samples[k].y) > r) {
      k_exit = static_cast<long>(k);
      break;
    }
  }

  auto fill = [&](OccupationMeasure& m, size_t lo, size_t hi) {
    double total = 0.0;
    for (size_t k = lo; k < hi; ++k) {
      double w = lambda * h * std::exp(-lambda * static_cast<double>(k) * h);
      m.y.push_back(traj.samples[k].y);
      m.q.push_back(traj.samples[k].q);
      m.w.push_back(w);
      total += w;
    }
    for (double& w : m.w) w /= total;
    m.x0 = traj.x0;
    m.lambda = lambda;
  };

  if (k_exit <= 0) {
    // Never exits (or exits immediately, which the precondition excludes).
    split.T_exit = std::numeric_limits<double>::infinity();
    split.theta = 1.0;
    fill(split.mu1, 0, traj.samples.size());
    // Conventional placeholder; consumers must not read mu2 when theta = 1.
    split.mu2.y = {traj.x0 + r};
    split.mu2.q = {0.0};
    split.mu2.w = {1.0};
    split.mu2.x0 = traj.x0;
    split.mu2.lambda = lambda;
    return split;
  }
  split.T_exit = static_cast<double>(k_exit) * h;
  split.theta = 1.0 - std::exp(-lambda * split.T_exit);
  fill(split.mu1, 0, static_cast<size_t>(k_exit));
  fill(split.mu2, static_cast<size_t>(k_exit), traj.samples.size());
  return split;
}

TightnessResult tightness_check(const DiscountedSolution& sol, double x0,
                                const CriticalProfile& vG, double K_lo, double K_hi,
                                double delta) {
  OccupationConfig cfg;
  Trajectory traj = extract_optimal_curve(sol, x0, cfg);
  OccupationMeasure mu = occupation_measure(traj);
  TightnessResult res;
  for (size_t k = 0; k < mu.w.size(); ++k) {
    if (mu.y[k] < K_lo || mu.y[k] > K_hi) res.lhs += mu.w[k];
  }
  res.rhs = (sol.lambda / delta) * (sol.value_at(x0) - vG(x0)) + cfg.mass_tol;
  res.pass = res.lhs <= res.rhs;
  return res;
}

double periodic_eval(const CriticalProfile& profile, double x) {
  double t = x - std::floor(x);
  return profile(t);
}

PairingResult pairing_test(const DiscountedSolution& sol, double x0, const CriticalProfile& v,
                           const MeasureSplit& split, const CriticalProfile* u0H_for_mu2) {
  PairingResult res;
  double term1 = split.mu1.integrate([&](double y, double) { return v(y); });
  double term2 = 0.0;
  if (split.theta < 1.0) {
    term2 = u0H_for_mu2
                ? split.mu2.integrate(
                      [&](double y, double) { return periodic_eval(*u0H_for_mu2, y); })
                : split.mu2.integrate([&](double y, double) { return v(y); });
  }
  double rhs = v(x0) - (split.theta * term1 + (1.0 - split.theta) * term2);
  double lhs = sol.value_at(x0);
  res.gap = lhs - rhs;
  res.pass = res.gap >= -(20.0 * sol.grid.dx() + 1e-6);
  return res;
}

}  // namespace weakkam
