#pragma once

#include <string>
#include <vector>

#include "weakkam/hamiltonian.hpp"

namespace weakkam {

inline constexpr double kTolLevel = 1e-8;
inline constexpr double kTolMean = 1e-6;
inline constexpr double kTolEquil = 1e-8;

// Z(x,a) = [p_minus, p_plus], the a-sublevel of G(x,.) in the momentum.
struct SublevelBracket {
  double x;
  double a;
  double p_minus;
  double p_plus;

  double width() const { return p_plus - p_minus; }
};

// One equilibrium component, reported by its midpoint. `periodic` entries
// stand for the whole family base + Z (copies re-verified on expansion).
struct Equilibrium {
  double base;
  bool periodic;
};

struct EquilibriumSet {
  std::vector<Equilibrium> items;

  // All equilibrium points inside [lo, hi]. Periodic entries are expanded to
  // integer translates; each candidate is re-verified against `keep`.
  std::vector<double> expand(double lo, double hi,
                             const std::function<bool(double)>& keep = nullptr) const;
};

enum class CaseTag { I, II_A, II_B, III };

std::string to_string(CaseTag tag);

struct CaseReport {
  double c_f_H = 0.0;
  double c_H = 0.0;
  double c_f_G = 0.0;
  double c_G = 0.0;
  CaseTag case_tag = CaseTag::III;
  EquilibriumSet equilibria_H;  // bases in [0,1), always periodic
  EquilibriumSet equilibria_G;
  double P_H_plus = 0.0;
  double P_H_minus = 0.0;
  double rho = 0.0;  // min over x of p+_H - p-_H at level c_H
  bool mather_constraint_active = false;
};

SublevelBracket sublevel_bracket(const HamiltonianSpec& spec, double x, double a,
                                 Which which = Which::G);

// Support function of the bracket: q * p_plus for q >= 0, q * p_minus otherwise.
double support_sigma(const SublevelBracket& bracket, double q);

struct FreeCriticalResult {
  double c_f;
  EquilibriumSet equilibria;
};

// c_f = sup_x min_p, scanned on a dense grid with parabolic refinement;
// equilibria reported as connected-component midpoints.
FreeCriticalResult free_critical_value(const HamiltonianSpec& spec, Which which,
                                       int grid_per_unit = 4096);

// (I_minus, I_plus) = averages over one period of the base-H bracket
// endpoints at level a. Composite Simpson with adaptive refinement near
// bracket degeneracies.
std::pair<double, double> mean_momenta(const HamiltonianSpec& spec, double a,
                                       int panels = 4096);

// Effective Hamiltonian of the base H evaluated at momentum shift theta:
// minimal a >= c_f(H) with I_minus(a) <= theta <= I_plus(a).
double effective_hamiltonian(const HamiltonianSpec& spec, double theta,
                             double tol = kTolLevel);

CaseReport classify(const HamiltonianSpec& spec);

}  // namespace weakkam
