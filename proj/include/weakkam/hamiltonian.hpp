#pragma once

#include <functional>
#include <memory>
#include <string>

#include "weakkam/errors.hpp"
#include "weakkam/numerics.hpp"

namespace weakkam {

enum class Which { H, G, V };
enum class Family { shifted_eikonal, quadratic, appendix_example, custom };
enum class SignHint { nonneg, nonpos, mixed };

// 1-periodic scalar function with a printable description.
struct PeriodicFunction {
  std::function<double(double)> eval;
  std::string description;

  static PeriodicFunction cosine();  // cos(2*pi*x)
  static PeriodicFunction zero();
};

// Compactly supported continuous potential. `empty` marks V == 0.
struct PotentialSpec {
  std::function<double(double)> eval;
  double support_lo = 0.0;
  double support_hi = 0.0;
  SignHint sign_hint = SignHint::mixed;
  bool empty = true;

  double operator()(double x) const {
    if (empty || x < support_lo || x > support_hi) return 0.0;
    return eval(x);
  }

  static PotentialSpec none();
  // cos^2 bump: amplitude * cos^2(pi (x-center)/(2 half_width)) on
  // [center - half_width, center + half_width]. Integral = amplitude * half_width.
  static PotentialSpec bump(double center, double half_width, double amplitude);
};

struct HamiltonianSpec {
  Family family = Family::shifted_eikonal;
  double theta = 0.0;            // shifted_eikonal: H = |theta + p| - U(x)
  PeriodicFunction U;            // shifted_eikonal / quadratic
  double eps1 = 1e-3;            // appendix_example parameter
  std::function<double(double, double)> custom;  // custom family, 1-periodic in x
  PotentialSpec potential;
  double p_search_bound = 8.0;   // P_max
  double q_velocity_bound = 4.0; // Q_max

  double base(double x, double p) const;  // H(x, p)
  double eval(double x, double p, Which which) const;

  static HamiltonianSpec shifted_eikonal(double theta, PeriodicFunction U, PotentialSpec V);
  static HamiltonianSpec quadratic(PeriodicFunction U, PotentialSpec V);
  static HamiltonianSpec appendix_example(double eps1);
};

// Appendix Hamiltonian building blocks, exposed for the counterexample runner.
namespace appendix {
double p1(double x);                       // -cos(2*pi*x)
double p2(double x, double eps1);          // lower momentum branch
double eps(double x);                      // piecewise affine cutoff weight
double hamiltonian(double x, double p, double eps1);
}  // namespace appendix

struct LagrangianView {
  const HamiltonianSpec* source;
  double q_domain;  // [-Q_max, Q_max]
};

double eval(const HamiltonianSpec& spec, double x, double p, Which which);

// Fenchel transform L(x,q) = sup_p (p q - G(x,p)) over [-P_max, P_max] by
// golden-section maximization; returns kLagrangianInf where the true
// transform is +infinity (outward slope at the search boundary positive).
// `which` selects the conjugated Hamiltonian (G by default, H for the
// unperturbed torus problems).
double fenchel_lagrangian(const LagrangianView& view, double x, double q);
double fenchel_lagrangian(const HamiltonianSpec& spec, double x, double q,
                          Which which = Which::G);

// Minimizes p -> H or G over [-P_max, P_max]. Flat minima (eikonal kink)
// resolve to the kink location. Throws CoercivityError if the minimizer sits
// at the search boundary.
ScalarOpt argmin_p(const HamiltonianSpec& spec, double x, Which which);

// Run-start validation of the spec invariants: periodicity of the base,
// midpoint convexity in p, coercivity at the declared bound relative to
// `max_level`, potential locality and continuity.
void validate_spec(const HamiltonianSpec& spec, double max_level);

}  // namespace weakkam
