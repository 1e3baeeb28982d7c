#include "weakkam/discounted.hpp"

#include <algorithm>
#include <cmath>

namespace weakkam {

std::string to_string(Scheme s) {
  return s == Scheme::semi_lagrangian ? "semi_lagrangian" : "godunov";
}

std::string to_string(Closure c) {
  switch (c) {
    case Closure::state_constraint: return "state_constraint";
    case Closure::periodic_ghost_left: return "periodic_ghost_left";
    case Closure::periodic_ghost_right: return "periodic_ghost_right";
  }
  return "?";
}

std::vector<double> default_lambda_list() {
  return {0.8, 0.4, 0.2, 0.1, 0.05, 0.025, 0.0125};
}

std::shared_ptr<const LagrangianTable> LagrangianTable::build(const HamiltonianSpec& spec,
                                                              const Grid1D& grid,
                                                              int n_velocity) {
  auto t = std::make_shared<LagrangianTable>();
  t->grid = grid;
  const double qmax = spec.q_velocity_bound;
  t->qs.resize(n_velocity);
  for (int j = 0; j < n_velocity; ++j)
    t->qs[j] = -qmax + 2.0 * qmax * j / (n_velocity - 1);
  t->line.resize(grid.n, n_velocity);
  for (int i = 0; i < grid.n; ++i) {
    for (int j = 0; j < n_velocity; ++j)
      t->line(i, j) = fenchel_lagrangian(spec, grid.node(i), t->qs[j], Which::G);
  }
  double inv_dx = 1.0 / grid.dx();
  t->n_per = static_cast<int>(std::round(inv_dx));
  if (std::abs(inv_dx - t->n_per) > 1e-9)
    throw ConfigError("grid spacing must divide the unit period");
  t->torus.resize(t->n_per, n_velocity);
  for (int i = 0; i < t->n_per; ++i) {
    double x = static_cast<double>(i) / t->n_per;
    for (int j = 0; j < n_velocity; ++j)
      t->torus(i, j) = fenchel_lagrangian(spec, x, t->qs[j], Which::H);
  }
  return t;
}

namespace {

double interp_row(const Eigen::MatrixXd& m, double s, int j, bool periodic) {
  const int n = static_cast<int>(m.rows());
  int i;
  double w;
  if (periodic) {
    double t = s - std::floor(s / n) * n;
    i = static_cast<int>(t);
    if (i >= n) i = 0;
    w = t - i;
  } else {
    if (s <= 0.0) {
      i = 0;
      w = 0.0;
    } else if (s >= n - 1) {
      i = n - 2;
      w = 1.0;
    } else {
      i = static_cast<int>(s);
      w = s - i;
    }
  }
  int i1 = periodic ? (i + 1) % n : i + 1;
  double a = m(i, j), b = m(i1, j);
  if (a >= kLagrangianInf / 2.0 || b >= kLagrangianInf / 2.0) return kLagrangianInf;
  return (1.0 - w) * a + w * b;
}

double interp_q(const Eigen::ArrayXd& qs, double q, const std::function<double(int)>& at) {
  const int n = static_cast<int>(qs.size());
  double s = (q - qs[0]) / (qs[1] - qs[0]);
  if (s <= 0.0) return at(0);
  if (s >= n - 1) return at(n - 1);
  int j = static_cast<int>(s);
  double w = s - j;
  double a = at(j), b = at(j + 1);
  if (a >= kLagrangianInf / 2.0 || b >= kLagrangianInf / 2.0) return kLagrangianInf;
  return (1.0 - w) * a + w * b;
}

}  // namespace

double LagrangianTable::line_at(double x, int j) const {
  return interp_row(line, (x - grid.x_lo) / grid.dx(), j, false);
}

double LagrangianTable::torus_at(double x, int j) const {
  return interp_row(torus, x * n_per, j, true);
}

double LagrangianTable::line_q(double x, double q) const {
  return interp_q(qs, q, [&](int j) { return line_at(x, j); });
}

double LagrangianTable::torus_q(double x, double q) const {
  return interp_q(qs, q, [&](int j) { return torus_at(x, j); });
}

namespace {

struct PolicyEntry {
  double q = 0.0;
  double cost = 0.0;   // running cost L at (node, q)
  double value = 0.0;  // operator value at the node
};

// Shared machinery for the torus and line solves: argmin over the velocity
// grid plus a golden refinement of the piecewise-linear objective around the
// discrete minimizer.
class SlEngine {
 public:
  SlEngine(double lambda, double c, double h, const Eigen::ArrayXd& qs, int refine_iters)
      : lambda_(lambda), c_(c), h_(h), qs_(qs), refine_(refine_iters) {}

  // objective phi(q) = (1-lambda h) * U(x - h q) + h (L(x, q) + c), where U
  // and L are supplied by the caller; q limited to [q_lo, q_hi].
  PolicyEntry improve_node(const std::function<double(double)>& U,
                           const std::function<double(int)>& L_at,
                           const std::function<double(double)>& L_q, double x, double q_lo,
                           double q_hi) const {
    const double disc = 1.0 - lambda_ * h_;
    int best_j = -1;
    double best_val = 1e300;
    for (int j = 0; j < qs_.size(); ++j) {
      double q = qs_[j];
      if (q < q_lo - 1e-14 || q > q_hi + 1e-14) continue;
      double Lv = L_at(j);
      if (Lv >= kLagrangianInf / 2.0) continue;
      double val = disc * U(x - h_ * q) + h_ * (Lv + c_);
      if (val < best_val) {
        best_val = val;
        best_j = j;
      }
    }
    if (best_j < 0) throw InternalError("no admissible velocity at x=" + std::to_string(x));
    PolicyEntry e;
    e.q = qs_[best_j];
    e.value = best_val;
    e.cost = L_at(best_j);
    if (refine_ > 0) {
      double lo = std::max(q_lo, best_j > 0 ? qs_[best_j - 1] : qs_[0]);
      double hi = std::min(q_hi, best_j + 1 < qs_.size() ? qs_[best_j + 1]
                                                         : qs_[qs_.size() - 1]);
      if (hi - lo > 1e-12) {
        auto phi = [&](double q) {
          double Lv = L_q(q);
          if (Lv >= kLagrangianInf / 2.0) return 1e300;
          return disc * U(x - h_ * q) + h_ * (Lv + c_);
        };
        ScalarOpt r = golden_min(phi, lo, hi, 1e-10, refine_);
        if (r.value < e.value) {
          e.q = r.x;
          e.value = r.value;
          e.cost = L_q(r.x);
        }
      }
    }
    return e;
  }

 private:
  double lambda_, c_, h_;
  const Eigen::ArrayXd& qs_;
  int refine_;
};

}  // namespace

TorusSolution solve_torus_discounted(const HamiltonianSpec& spec, double lambda, double c,
                                     std::shared_ptr<const LagrangianTable> table,
                                     const SlConfig& config) {
  if (!(lambda > 0.0)) throw ConfigError("discount factor must be positive");
  const int n = table->n_per;
  const double dx = 1.0 / n;
  const double h = dx / spec.q_velocity_bound;
  if (lambda * h >= 1.0) throw ConfigError("non-contractive step: lambda * h >= 1");
  const double disc = 1.0 - lambda * h;

  TorusSolution sol;
  sol.n = n;
  sol.lambda = lambda;
  sol.level = c;
  sol.h = h;
  sol.table = table;
  sol.values = Eigen::ArrayXd::Zero(n);
  sol.policy_q = Eigen::ArrayXd::Zero(n);

  SlEngine engine(lambda, c, h, table->qs, config.refine_iterations);
  const double qmax = spec.q_velocity_bound;
  std::vector<PolicyEntry> policy(n);

  int iter = 0;
  for (; iter < config.max_policy_iterations; ++iter) {
    // Policy improvement.
    for (int i = 0; i < n; ++i) {
      double x = i * dx;
      policy[i] = engine.improve_node(
          [&](double y) { return interp_periodic(sol.values, y); },
          [&](int j) { return table->torus(i, j); },
          [&](double q) { return table->torus_q(x, q); }, x, -qmax, qmax);
    }
    // Policy evaluation: cyclic tridiagonal (feet stay within one cell).
    Eigen::ArrayXd lower = Eigen::ArrayXd::Zero(n), upper = Eigen::ArrayXd::Zero(n),
                   diag = Eigen::ArrayXd::Ones(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      double foot = i * dx - h * policy[i].q;
      double s = foot / dx;
      double base = std::floor(s);
      int j = static_cast<int>(base);
      double w = s - base;
      rhs[i] = h * (policy[i].cost + c);
      auto add = [&](int idx, double weight) {
        if (weight == 0.0) return;
        int k = ((idx % n) + n) % n;
        if (k == i)
          diag[i] -= disc * weight;
        else if (k == ((i - 1 + n) % n))
          lower[i] -= disc * weight;
        else if (k == (i + 1) % n)
          upper[i] -= disc * weight;
        else
          throw InternalError("torus foot outside the neighbor stencil");
      };
      add(j, 1.0 - w);
      add(j + 1, w);
    }
    Eigen::ArrayXd next = solve_cyclic_tridiagonal(lower, diag, upper, rhs);
    double change = (next - sol.values).abs().maxCoeff();
    sol.values = next;
    for (int i = 0; i < n; ++i) sol.policy_q[i] = policy[i].q;
    if (change <= config.tol_fix * lambda && iter > 0) break;
  }
  if (iter >= config.max_policy_iterations)
    throw ConvergenceError("torus policy iteration did not settle", 0.0);
  return sol;
}

namespace {

struct LineProblem {
  const HamiltonianSpec* spec;
  const Grid1D* grid;
  double lambda, c, h;
  Closure closure;
  const LagrangianTable* table;
  const TorusSolution* torus;

  bool ghost_left() const { return closure == Closure::periodic_ghost_left; }
  bool ghost_right() const { return closure == Closure::periodic_ghost_right; }

  // Value lookup for a foot point; ghost regions read the torus solution.
  // Feet within roundoff of a constrained boundary clamp inside.
  double value_at(const Eigen::ArrayXd& u, double y) const {
    if (y < grid->x_lo) {
      if (ghost_left()) return torus->value_at(y);
      if (y > grid->x_lo - 1e-9) return u[0];
      return 1e300;  // inadmissible under state constraints
    }
    if (y > grid->x_hi) {
      if (ghost_right()) return torus->value_at(y);
      if (y < grid->x_hi + 1e-9) return u[grid->n - 1];
      return 1e300;
    }
    return grid->interp(u, y);
  }

  // Velocity bounds at a node from the state-constrained sides.
  std::pair<double, double> q_range(double x) const {
    double qmax = spec->q_velocity_bound;
    double lo = -qmax, hi = qmax;
    if (!ghost_right()) lo = std::max(lo, (x - grid->x_hi) / h);
    if (!ghost_left()) hi = std::min(hi, (x - grid->x_lo) / h);
    return {lo, hi};
  }
};

Eigen::ArrayXd improve_all(const LineProblem& P, const SlConfig& config,
                           const Eigen::ArrayXd& u, std::vector<PolicyEntry>& policy) {
  const Grid1D& g = *P.grid;
  SlEngine engine(P.lambda, P.c, P.h, P.table->qs, config.refine_iterations);
  Eigen::ArrayXd Tu(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    auto [qlo, qhi] = P.q_range(x);
    policy[i] = engine.improve_node(
        [&](double y) { return P.value_at(u, y); },
        [&](int j) { return P.table->line(i, j); },
        [&](double q) { return P.table->line_q(x, q); }, x, qlo, qhi);
    Tu[i] = policy[i].value;
  }
  return Tu;
}

Eigen::ArrayXd evaluate_policy(const LineProblem& P, const std::vector<PolicyEntry>& policy) {
  const Grid1D& g = *P.grid;
  const int n = g.n;
  const double disc = 1.0 - P.lambda * P.h;
  Eigen::ArrayXd lower = Eigen::ArrayXd::Zero(n), upper = Eigen::ArrayXd::Zero(n),
                 diag = Eigen::ArrayXd::Ones(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    double foot = g.node(i) - P.h * policy[i].q;
    rhs[i] = P.h * (policy[i].cost + P.c);
    if (foot < g.x_lo || foot > g.x_hi) {
      bool ghost = (foot < g.x_lo && P.ghost_left()) || (foot > g.x_hi && P.ghost_right());
      if (ghost) {
        rhs[i] += disc * P.torus->value_at(foot);
        continue;
      }
      foot = std::clamp(foot, g.x_lo, g.x_hi);  // roundoff at a constrained boundary
    }
    double s = (foot - g.x_lo) / g.dx();
    int j = std::min(static_cast<int>(s), n - 2);
    double w = s - j;
    auto add = [&](int idx, double weight) {
      if (weight == 0.0) return;
      if (idx == i)
        diag[i] -= disc * weight;
      else if (idx == i - 1)
        lower[i] -= disc * weight;
      else if (idx == i + 1)
        upper[i] -= disc * weight;
      else
        throw InternalError("line foot outside the neighbor stencil");
    };
    add(j, 1.0 - w);
    add(j + 1, w);
  }
  return solve_tridiagonal(lower, diag, upper, rhs);
}

}  // namespace

DiscountedSolution solve_semilagrangian(const HamiltonianSpec& spec, double lambda, double c,
                                        const Grid1D& grid, const SlConfig& config) {
  grid.validate();
  if (!(lambda > 0.0)) throw ConfigError("discount factor must be positive");
  if (!spec.potential.empty) {
    if (grid.x_lo > spec.potential.support_lo - 4.0 || grid.x_hi < spec.potential.support_hi + 4.0)
      throw ConfigError("grid must contain supp(V) with a margin of at least 4 periods");
  }
  auto table = config.table;
  if (!table || table->grid.n != grid.n || table->grid.x_lo != grid.x_lo ||
      table->grid.x_hi != grid.x_hi) {
    table = LagrangianTable::build(spec, grid, config.n_velocity);
  }
  const double h = grid.dx() / spec.q_velocity_bound;
  if (lambda * h >= 1.0) throw ConfigError("non-contractive step: lambda * h >= 1");

  DiscountedSolution sol;
  sol.grid = grid;
  sol.lambda = lambda;
  sol.level = c;
  sol.scheme = Scheme::semi_lagrangian;
  sol.closure = config.closure;
  sol.h = h;
  sol.table = table;
  if (config.closure != Closure::state_constraint) {
    sol.torus = std::make_shared<TorusSolution>(
        solve_torus_discounted(spec, lambda, c, table, config));
  }

  LineProblem P{&spec, &grid, lambda, c, h, config.closure, table.get(), sol.torus.get()};
  std::vector<PolicyEntry> policy(grid.n);
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(grid.n);

  int iter = 0;
  double change = 1e300;
  for (; iter < config.max_policy_iterations; ++iter) {
    improve_all(P, config, u, policy);
    Eigen::ArrayXd next = evaluate_policy(P, policy);
    change = (next - u).abs().maxCoeff();
    u = next;
    if (change <= config.tol_fix * lambda && iter > 0) break;
  }
  Eigen::ArrayXd Tu = improve_all(P, config, u, policy);
  sol.residual_sup = (Tu - u).abs().maxCoeff();
  if (iter >= config.max_policy_iterations)
    throw ConvergenceError("policy iteration cap exceeded", sol.residual_sup);
  sol.values = u;
  sol.iterations = iter + 1;
  sol.policy_q.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) sol.policy_q[i] = policy[i].q;

  // Type invariants: discounted sup bound and Lipschitz bound.
  double M = 0.0;
  for (int i = 0; i < grid.n; ++i)
    M = std::max(M, std::abs(spec.eval(grid.node(i), 0.0, Which::G)));
  double sup_bound = (M + std::abs(c)) / lambda + 10.0 * grid.dx() * (1.0 + M) + 1e-9;
  if (sol.values.abs().maxCoeff() > sup_bound)
    throw InternalError("discounted solution exceeds the (M+|a|)/lambda bound");
  double kappa = 0.0;
  double klo = spec.potential.empty ? 0.0 : std::min(0.0, spec.potential.support_lo - 0.5);
  double khi = spec.potential.empty ? 1.0 : std::max(1.0, spec.potential.support_hi + 0.5);
  for (int i = 0; i <= 128; ++i) {
    double x = klo + (khi - klo) * i / 128.0;
    SublevelBracket b = sublevel_bracket(spec, x, M + std::abs(c), Which::G);
    kappa = std::max({kappa, std::abs(b.p_minus), std::abs(b.p_plus)});
  }
  double lip = (sol.values.tail(grid.n - 1) - sol.values.head(grid.n - 1)).abs().maxCoeff() /
               grid.dx();
  if (lip > kappa + 1.0)
    throw InternalError("discounted solution violates the kappa Lipschitz bound");
  return sol;
}

Eigen::ArrayXd apply_dpp_operator(const DiscountedSolution& sol, const Eigen::ArrayXd& u) {
  // Re-derive the spec used implicitly through the stored table.
  LineProblem P{nullptr, &sol.grid, sol.lambda, sol.level, sol.h, sol.closure,
                sol.table.get(), sol.torus.get()};
  const Grid1D& g = sol.grid;
  const Eigen::ArrayXd& qs = sol.table->qs;
  const double qmax = qs[qs.size() - 1];
  const double disc = 1.0 - sol.lambda * sol.h;
  Eigen::ArrayXd Tu(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i);
    double qlo = -qmax, qhi = qmax;
    if (!P.ghost_right()) qlo = std::max(qlo, (x - g.x_hi) / sol.h);
    if (!P.ghost_left()) qhi = std::min(qhi, (x - g.x_lo) / sol.h);
    double best = 1e300;
    for (int j = 0; j < qs.size(); ++j) {
      double q = qs[j];
      if (q < qlo - 1e-14 || q > qhi + 1e-14) continue;
      double Lv = sol.table->line(i, j);
      if (Lv >= kLagrangianInf / 2.0) continue;
      double val = disc * P.value_at(u, x - sol.h * q) + sol.h * (Lv + sol.level);
      best = std::min(best, val);
    }
    Tu[i] = best;
  }
  return Tu;
}

DiscountedSolution solve_godunov(const HamiltonianSpec& spec, double lambda, double c,
                                 const Grid1D& grid, const GodunovConfig& config) {
  grid.validate();
  if (!(lambda > 0.0)) throw ConfigError("discount factor must be positive");
  const int n = grid.n;
  const double dx = grid.dx();

  // Sonic points and a slope bound for the CFL condition.
  Eigen::ArrayXd pstar(n);
  double slope = 1.0;
  double M = 0.0;
  for (int i = 0; i < n; ++i) {
    pstar[i] = argmin_p(spec, grid.node(i), Which::G).x;
    M = std::max(M, std::abs(spec.eval(grid.node(i), 0.0, Which::G)));
  }
  for (int i = 0; i < 64; ++i) {
    double x = grid.x_lo + (grid.x_hi - grid.x_lo) * i / 63.0;
    SublevelBracket b = sublevel_bracket(spec, x, M + std::abs(c) + 1.0, Which::G);
    const double d = 1e-6;
    slope = std::max(slope, std::abs(spec.eval(x, b.p_plus + d, Which::G) -
                                     spec.eval(x, b.p_plus, Which::G)) / d);
    slope = std::max(slope, std::abs(spec.eval(x, b.p_minus - d, Which::G) -
                                     spec.eval(x, b.p_minus, Which::G)) / d);
  }
  const double dt = config.cfl * dx / slope;

  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(n);
  auto numerical_h = [&](int i, const Eigen::ArrayXd& v) {
    double a = i > 0 ? (v[i] - v[i - 1]) / dx : -1e300;        // D^- u
    double b = i + 1 < n ? (v[i + 1] - v[i]) / dx : 1e300;     // D^+ u
    double x = grid.node(i);
    double left = i > 0 ? spec.eval(x, std::max(a, pstar[i]), Which::G) : -1e300;
    double right = i + 1 < n ? spec.eval(x, std::min(b, pstar[i]), Which::G) : -1e300;
    if (i == 0) return right;
    if (i + 1 == n) return left;
    return std::max(left, right);
  };

  double residual = 1e300;
  long sweeps = 0;
  const long cap = std::min<long>(config.max_sweeps, static_cast<long>(1e7 / (lambda * dt)) + 1);
  while (sweeps < cap) {
    ++sweeps;
    bool forward = (sweeps % 2) == 1;
    for (int k = 0; k < n; ++k) {
      int i = forward ? k : n - 1 - k;
      double res = lambda * u[i] + numerical_h(i, u) - c;
      u[i] -= dt * res;
    }
    residual = 0.0;
    for (int i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(lambda * u[i] + numerical_h(i, u) - c));
    if (residual <= config.residual_tol) break;
  }
  if (residual > config.residual_tol)
    throw ConvergenceError("godunov sweep cap exceeded", residual);

  DiscountedSolution sol;
  sol.grid = grid;
  sol.lambda = lambda;
  sol.level = c;
  sol.values = u;
  sol.residual_sup = residual;
  sol.iterations = static_cast<int>(sweeps);
  sol.scheme = Scheme::godunov;
  sol.h = dt;
  return sol;
}

ConvergenceTable lambda_sweep(const HamiltonianSpec& spec, const CaseReport& report,
                              const std::vector<double>& lambdas, const Grid1D& grid,
                              double window_lo, double window_hi, const SlConfig& config) {
  if (window_lo < grid.x_lo || window_hi > grid.x_hi)
    throw ConfigError("window must lie inside the grid");
  for (size_t i = 1; i < lambdas.size(); ++i)
    if (!(lambdas[i] < lambdas[i - 1]) || !(lambdas[i] > 0.0))
      throw ConfigError("lambda list must be positive and decreasing");

  SlConfig cfg = config;
  switch (report.case_tag) {
    case CaseTag::II_A: cfg.closure = Closure::periodic_ghost_left; break;
    case CaseTag::II_B: cfg.closure = Closure::periodic_ghost_right; break;
    default: cfg.closure = Closure::state_constraint; break;
  }
  if (!cfg.table) cfg.table = LagrangianTable::build(spec, grid, cfg.n_velocity);

  CriticalProfile uH = u0_H(spec, report, grid);
  CriticalProfile u0 = u0_G_envelope(spec, report, uH, grid);

  ConvergenceTable table;
  table.dx = grid.dx();
  int i_lo = static_cast<int>(std::ceil((window_lo - grid.x_lo) / grid.dx() - 1e-9));
  int i_hi = static_cast<int>(std::floor((window_hi - grid.x_lo) / grid.dx() + 1e-9));
  double prev = 1e300;
  for (double lam : lambdas) {
    DiscountedSolution sol = solve_semilagrangian(spec, lam, report.c_G, grid, cfg);
    double err = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) err = std::max(err, std::abs(sol.values[i] - u0.values[i]));
    table.rows.push_back({lam, err, sol.iterations, sol.residual_sup, Scheme::semi_lagrangian});
    if (err > prev + grid.dx()) table.decay_monotone = false;
    prev = err;
  }
  return table;
}

double domain_doubling_check(const HamiltonianSpec& spec, double lambda, double c,
                             const Grid1D& grid, double window_lo, double window_hi,
                             const SlConfig& config) {
  double base_lo = spec.potential.empty ? 0.0 : std::floor(spec.potential.support_lo);
  double base_hi = spec.potential.empty ? 1.0 : std::ceil(spec.potential.support_hi);
  double dx = grid.dx();
  double lo2 = base_lo - 2.0 * (base_lo - grid.x_lo);
  double hi2 = base_hi + 2.0 * (grid.x_hi - base_hi);
  int n2 = static_cast<int>(std::round((hi2 - lo2) / dx)) + 1;
  Grid1D doubled = Grid1D::regular(lo2, hi2, n2);

  SlConfig cfg = config;
  cfg.table.reset();
  DiscountedSolution a = solve_semilagrangian(spec, lambda, c, grid, config);
  DiscountedSolution b = solve_semilagrangian(spec, lambda, c, doubled, cfg);
  double worst = 0.0;
  int i_lo = static_cast<int>(std::ceil((window_lo - grid.x_lo) / dx - 1e-9));
  int i_hi = static_cast<int>(std::floor((window_hi - grid.x_lo) / dx + 1e-9));
  for (int i = i_lo; i <= i_hi; ++i) {
    double x = grid.node(i);
    worst = std::max(worst, std::abs(a.values[i] - b.value_at(x)));
  }
  return worst;
}

}  // namespace weakkam
