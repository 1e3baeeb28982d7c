#pragma once

#include <optional>

#include "weakkam/grid.hpp"
#include "weakkam/mather.hpp"
#include "weakkam/semidistance.hpp"

namespace weakkam {

enum class ProfileKind { u0_H, u0_G, periodic_solution, strict_subsolution_vG };

enum class ConditionUStatus { verified_interior, verified_tonelli, unverifiable };

std::string to_string(ProfileKind kind);

struct CriticalProfile {
  Grid1D grid;
  Eigen::ArrayXd values;
  double level = 0.0;
  ProfileKind kind = ProfileKind::u0_G;
  ConditionUStatus condition_u = ConditionUStatus::verified_interior;

  double operator()(double x) const { return grid.interp(values, x); }
};

// Checks the a.e. subsolution property on interior nodes: G(x_i, d) <= a +
// tol for both one-sided difference quotients (convexity covers the interval
// between them). Returns the worst violation.
double subsolution_excess(const HamiltonianSpec& spec, const CriticalProfile& profile,
                          Which which);

// Periodic critical solution of H at level c(H): in the strictly
// supercritical case the primitive of the zero-mean bracket endpoint, at the
// free critical level the equilibrium semidistance envelope.
CriticalProfile periodic_critical_solution(const HamiltonianSpec& spec, const CaseReport& report,
                                           const Grid1D& grid);

// Vanishing-discount limit of the unperturbed periodic problem. In case II
// the additive constant is fixed by a zero average against the torus LP
// Mather measure; at the free critical level the equilibrium envelope of S_H
// is used (condition (U) status recorded on the profile).
CriticalProfile u0_H(const HamiltonianSpec& spec, const CaseReport& report, const Grid1D& grid);

// Obstacle envelope for u0_G: min over the case-dependent obstacle set of
// g(y) + S_G(y, x).
CriticalProfile u0_G_envelope(const HamiltonianSpec& spec, const CaseReport& report,
                              const CriticalProfile& u0H, const Grid1D& grid);

struct StrictSubsolution {
  CriticalProfile profile;
  double K_lo = 0.0;  // interval where the coercive branch is active
  double K_hi = 0.0;
  double delta = 0.0;  // uniform strictness margin c(G) - c(H)
};

// Case I only: v_G = min(S_G(0, .), u_H + k) shifted nonpositive, uniformly
// strict outside K.
StrictSubsolution strict_subsolution_vG(const HamiltonianSpec& spec, const CaseReport& report,
                                        const Grid1D& grid);

}  // namespace weakkam
