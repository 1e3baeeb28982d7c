#pragma once

#include <memory>
#include <vector>

#include "weakkam/grid.hpp"
#include "weakkam/profiles.hpp"

namespace weakkam {

enum class Scheme { semi_lagrangian, godunov };

// Boundary closure for the truncated domain. State constraints restrict
// velocities inward; the periodic-ghost variants feed the escape side of a
// case II problem with the torus solution of the unperturbed Hamiltonian,
// which the bounded discounted solutions match identically out there.
enum class Closure { state_constraint, periodic_ghost_left, periodic_ghost_right };

std::string to_string(Scheme s);
std::string to_string(Closure c);

// Precomputed Fenchel transforms on the product of space nodes and the
// velocity grid: rows for the line grid (L_G) and for one period (L_H).
// Immutable and shareable across lambda solves.
struct LagrangianTable {
  Grid1D grid;
  Eigen::ArrayXd qs;
  Eigen::MatrixXd line;   // grid.n x nq, Lagrangian of G at line nodes
  Eigen::MatrixXd torus;  // n_per x nq, Lagrangian of H at k / n_per
  int n_per = 0;

  static std::shared_ptr<const LagrangianTable> build(const HamiltonianSpec& spec,
                                                      const Grid1D& grid, int n_velocity = 201);

  // Linear interpolation along x at fixed q index; inf-contaminated cells
  // stay inf.
  double line_at(double x, int j) const;
  double torus_at(double x, int j) const;
  // Interpolation in q between adjacent columns at a fixed position.
  double line_q(double x, double q) const;
  double torus_q(double x, double q) const;
};

struct SlConfig {
  int n_velocity = 201;
  double tol_fix = 1e-9;
  int max_policy_iterations = 200;
  int refine_iterations = 24;
  Closure closure = Closure::state_constraint;
  std::shared_ptr<const LagrangianTable> table;  // optional, built on demand
};

struct TorusSolution {
  int n = 0;
  double lambda = 0.0;
  double level = 0.0;
  double h = 0.0;
  Eigen::ArrayXd values;
  Eigen::ArrayXd policy_q;
  std::shared_ptr<const LagrangianTable> table;

  double value_at(double x) const { return interp_periodic(values, x); }
};

struct DiscountedSolution {
  Grid1D grid;
  double lambda = 0.0;
  double level = 0.0;  // right-hand side c
  Eigen::ArrayXd values;
  double residual_sup = 0.0;
  int iterations = 0;
  Scheme scheme = Scheme::semi_lagrangian;
  Closure closure = Closure::state_constraint;
  double h = 0.0;
  Eigen::ArrayXd policy_q;
  std::shared_ptr<const LagrangianTable> table;
  std::shared_ptr<const TorusSolution> torus;  // set for ghost closures

  double value_at(double x) const { return grid.interp(values, x); }
};

TorusSolution solve_torus_discounted(const HamiltonianSpec& spec, double lambda, double c,
                                     std::shared_ptr<const LagrangianTable> table,
                                     const SlConfig& config = {});

DiscountedSolution solve_semilagrangian(const HamiltonianSpec& spec, double lambda, double c,
                                        const Grid1D& grid, const SlConfig& config = {});

// One application of the semi-Lagrangian dynamic-programming operator to
// arbitrary nodal values (monotonicity and comparison probes).
Eigen::ArrayXd apply_dpp_operator(const DiscountedSolution& sol, const Eigen::ArrayXd& u);

struct GodunovConfig {
  double residual_tol = 1e-7;
  double cfl = 0.5;
  long max_sweeps = 2000000;
};

// Cross-check scheme: damped fixed point of the Godunov discretization with
// alternating Gauss-Seidel sweeps.
DiscountedSolution solve_godunov(const HamiltonianSpec& spec, double lambda, double c,
                                 const Grid1D& grid, const GodunovConfig& config = {});

struct ConvergenceRow {
  double lambda;
  double sup_error;
  int iterations;
  double residual;
  Scheme scheme;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool decay_monotone = true;  // e(lambda) nonincreasing up to a dx allowance
  double dx = 0.0;
};

// Solves the discounted equation for each lambda (decreasing) and measures
// sup over the window of |u^lambda - u0_G|. The closure is derived from the
// case classification; profiles are built on the solver grid.
ConvergenceTable lambda_sweep(const HamiltonianSpec& spec, const CaseReport& report,
                              const std::vector<double>& lambdas, const Grid1D& grid,
                              double window_lo, double window_hi,
                              const SlConfig& config = {});

// Truncation-error audit: re-solve on a grid with doubled margins and return
// the sup discrepancy over the window.
double domain_doubling_check(const HamiltonianSpec& spec, double lambda, double c,
                             const Grid1D& grid, double window_lo, double window_hi,
                             const SlConfig& config = {});

std::vector<double> default_lambda_list();

}  // namespace weakkam
