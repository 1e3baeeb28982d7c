#pragma once

#include "weakkam/discounted.hpp"

namespace weakkam {

struct TrajectorySample {
  double t;  // -k h
  double y;
  double q;
};

struct Trajectory {
  double x0 = 0.0;
  double lambda = 0.0;
  double h = 0.0;
  std::vector<TrajectorySample> samples;
  double horizon = 0.0;          // T_cut actually walked
  bool truncated = false;        // boundary reached before the mass tolerance
  double dpp_residual_max = 0.0; // worst one-step dynamic-programming defect
};

struct OccupationMeasure {
  std::vector<double> y;
  std::vector<double> q;
  std::vector<double> w;  // normalized to total 1
  double x0 = 0.0;
  double lambda = 0.0;

  double total() const;
  double integrate(const std::function<double(double, double)>& f) const;  // f(y, q)
};

struct MeasureSplit {
  double r = 0.0;
  double T_exit = 0.0;    // +inf encoded as infinity()
  double theta = 1.0;     // 1 - exp(-lambda T_exit)
  OccupationMeasure mu1;  // pre-exit part, renormalized
  OccupationMeasure mu2;  // post-exit part; conventional atom when T = inf
};

struct OccupationConfig {
  double mass_tol = 1e-6;  // horizon cut at exp(-lambda T) < mass_tol
  int refine_iterations = 12;
};

// Backward Euler walk along the discrete optimal feedback of the converged
// semi-Lagrangian solution. Walks may continue into the torus region when
// the solution carries a periodic companion; otherwise they stop at the
// boundary margin with a truncation flag.
Trajectory extract_optimal_curve(const DiscountedSolution& sol, double x0,
                                 const OccupationConfig& config = {});

OccupationMeasure occupation_measure(const Trajectory& traj);

MeasureSplit split_at_radius(const Trajectory& traj, double r);

struct TightnessResult {
  double lhs = 0.0;  // projected mass outside K
  double rhs = 0.0;  // (lambda/delta)(u^lambda(x0) - v_G(x0)) + mass tolerance
  bool pass = false;
};

TightnessResult tightness_check(const DiscountedSolution& sol, double x0,
                                const CriticalProfile& vG, double K_lo, double K_hi,
                                double delta);

struct PairingResult {
  double gap = 0.0;  // lhs - rhs of the pairing inequality
  bool pass = false;
};

// u^lambda(x0) >= v(x0) - (theta int v d mu1 + (1-theta) int w d mu2), with
// w = v by default or the periodic profile on the mu2 atoms (case II form).
PairingResult pairing_test(const DiscountedSolution& sol, double x0, const CriticalProfile& v,
                           const MeasureSplit& split, const CriticalProfile* u0H_for_mu2 = nullptr);

// Evaluates a profile 1-periodically through its values on [0, 1].
double periodic_eval(const CriticalProfile& profile, double x);

}  // namespace weakkam
