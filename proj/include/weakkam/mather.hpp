#pragma once

#include <vector>

#include "weakkam/lp.hpp"
#include "weakkam/sublevel.hpp"

namespace weakkam {

enum class LpDomain { H_on_torus, G_on_window };

struct PhaseGridSpec {
  int nx = 256;      // x cells (torus: over one period, window: over the window)
  int nq = 64;       // q cells on [-Q_max, Q_max], atoms at the nq+1 nodes
  int k_basis = 8;   // trigonometric pairs on the torus
};

struct DiscreteClosedMeasure {
  std::vector<double> x;
  std::vector<double> q;
  std::vector<double> w;

  double total() const;
  // max_k |sum w phi_k'(x) q| over the torus trig basis (k pairs).
  double closure_residual_torus(int k_basis) const;
  // integral of f(x) against the projected measure
  double average(const std::function<double(double)>& f) const;
};

struct LPResult {
  double optimal_value = 0.0;
  DiscreteClosedMeasure measure;
  double dual_gap_proxy = 0.0;
  int iterations = 0;
};

// Minimizes the Lagrangian over discrete closed measures.
//   H_on_torus:  atoms on one period, closure against sin/cos(2 pi k x);
//                optimum approximates -c(H).
//   G_on_window: atoms on [window_lo, window_hi] (must cover supp(V) with a
//                1-period margin), closure against hat functions with free
//                boundary values; optimum approximates -c_f(G).
LPResult closed_measure_lp(const HamiltonianSpec& spec, LpDomain domain,
                           PhaseGridSpec resolution = {}, double window_lo = 0.0,
                           double window_hi = 0.0);

// Delta measures at the equilibria of G; each attains -c_f(G) in the LP
// objective within 1e-9.
std::vector<DiscreteClosedMeasure> equilibrium_mather_G(const HamiltonianSpec& spec,
                                                        const CaseReport& report);

struct AppendixReport {
  double eps1 = 0.0;
  double c_f = 0.0;
  double I_plus = 0.0;
  double gamma_period_T = 0.0;
  double rho = 0.0;    // min of eps + (p1 - p2) on the fast intervals
  double delta = 0.0;  // min of u_y on the slow window
  double paper_bound = 0.0;  // -4/rho + delta/(4 eps1)
  double closure_residual = 0.0;
  std::vector<std::pair<double, double>> integrals;  // (y, integral of u_y d mu)
  double min_integral = 0.0;
};

// Builds the Appendix Hamiltonian, verifies c_f = 0 and the zero mean of
// p+_H, integrates the Birkhoff loop, and evaluates the periodic-solution
// integrals against the loop measure for y in [-0.01, 0.01].
AppendixReport appendix_counterexample(double eps1, int y_samples = 41);

}  // namespace weakkam
