#include "weakkam/mather.hpp"

#include <cmath>
#include <limits>

namespace weakkam {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double DiscreteClosedMeasure::total() const {
  double s = 0.0;
  for (double wi : w) s += wi;
  return s;
}

double DiscreteClosedMeasure::closure_residual_torus(int k_basis) const {
  double worst = 0.0;
  for (int k = 1; k <= k_basis; ++k) {
    double rc = 0.0, rs = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      rc += w[i] * std::cos(kTwoPi * k * x[i]) * q[i];
      rs += w[i] * std::sin(kTwoPi * k * x[i]) * q[i];
    }
    worst = std::max({worst, std::abs(rc), std::abs(rs)});
  }
  return worst;
}

double DiscreteClosedMeasure::average(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

namespace {

struct AtomGrid {
  std::vector<double> xs;  // atom abscissae (cell centers)
  std::vector<double> qs;  // atom velocities (q nodes)
};

AtomGrid make_atom_grid(const HamiltonianSpec& spec, const PhaseGridSpec& res, double lo,
                        double hi) {
  AtomGrid g;
  g.xs.resize(res.nx);
  double dx = (hi - lo) / res.nx;
  for (int i = 0; i < res.nx; ++i) g.xs[i] = lo + (i + 0.5) * dx;
  g.qs.resize(res.nq + 1);
  double qmax = spec.q_velocity_bound;
  for (int j = 0; j <= res.nq; ++j) g.qs[j] = -qmax + 2.0 * qmax * j / res.nq;
  return g;
}

// Mean-zero convex combination of the bracket endpoints of H at the given
// level: a periodic a.e. subsolution gradient field usable as a Fenchel
// certificate (reduces to the bracket midpoint in symmetric cases).
std::vector<double> certificate_field(const HamiltonianSpec& spec, double level,
                                      const std::vector<double>& xs, Which which) {
  std::vector<double> pm(xs.size()), pp(xs.size());
  double mean_m = 0.0, mean_p = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    SublevelBracket b = sublevel_bracket(spec, xs[i], level, which);
    pm[i] = b.p_minus;
    pp[i] = b.p_plus;
    mean_m += pm[i];
    mean_p += pp[i];
  }
  mean_m /= xs.size();
  mean_p /= xs.size();
  double gamma = 0.5;
  if (which == Which::H && std::abs(mean_p - mean_m) > 1e-12) {
    gamma = mean_p / (mean_p - mean_m);
    gamma = std::min(1.0, std::max(0.0, gamma));
  }
  std::vector<double> field(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) field[i] = gamma * pm[i] + (1.0 - gamma) * pp[i];
  return field;
}

}  // namespace

LPResult closed_measure_lp(const HamiltonianSpec& spec, LpDomain domain, PhaseGridSpec res,
                           double window_lo, double window_hi) {
  const bool torus = domain == LpDomain::H_on_torus;
  double lo = torus ? 0.0 : window_lo;
  double hi = torus ? 1.0 : window_hi;
  if (!torus) {
    if (!(window_lo < window_hi)) throw DomainError("closed_measure_lp: empty window");
    if (!spec.potential.empty &&
        (window_lo > spec.potential.support_lo - 1.0 || window_hi < spec.potential.support_hi + 1.0))
      throw DomainError("closed_measure_lp: window must cover supp(V) with a 1-period margin");
  }
  AtomGrid g = make_atom_grid(spec, res, lo, hi);
  const Which which = torus ? Which::H : Which::G;

  // Objective and admissibility per atom.
  const int nx = static_cast<int>(g.xs.size());
  const int nqn = static_cast<int>(g.qs.size());
  std::vector<double> L(nx * nqn);
  std::vector<int> keep;
  keep.reserve(nx * nqn);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nqn; ++j) {
      double v = fenchel_lagrangian(spec, g.xs[i], g.qs[j], which);
      L[i * nqn + j] = v;
      if (v < kLagrangianInf / 2.0) keep.push_back(i * nqn + j);
    }
  }

  const int ncols = static_cast<int>(keep.size());
  const int mrows = torus ? 1 + 2 * res.k_basis : 1 + (nx + 1);
  Eigen::MatrixXd A(mrows, ncols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mrows);
  Eigen::VectorXd c(ncols);
  b[0] = 1.0;
  for (int col = 0; col < ncols; ++col) {
    int idx = keep[col];
    int i = idx / nqn, j = idx % nqn;
    c[col] = L[idx];
    A(0, col) = 1.0;
    if (torus) {
      for (int k = 1; k <= res.k_basis; ++k) {
        A(2 * k - 1, col) = std::cos(kTwoPi * k * g.xs[i]) * g.qs[j];
        A(2 * k, col) = std::sin(kTwoPi * k * g.xs[i]) * g.qs[j];
      }
    } else {
      // Hat test functions at the nx+1 cell boundaries (free boundary
      // values): rows scaled by the cell width.
      for (int k = 0; k <= nx; ++k) A(1 + k, col) = 0.0;
      A(1 + i, col) = -g.qs[j];
      A(1 + i + 1, col) = g.qs[j];
    }
  }

  LpSolution sol = solve_standard_lp(A, b, c);
  if (sol.status == LpStatus::infeasible)
    throw InternalError("closed-measure LP infeasible (equilibrium atoms should be feasible)");
  if (sol.status == LpStatus::unbounded)
    throw InternalError("closed-measure LP unbounded");
  if (sol.status == LpStatus::iteration_limit)
    throw ConvergenceError("closed-measure LP hit the iteration cap", 0.0);

  LPResult out;
  out.optimal_value = sol.objective;
  out.iterations = sol.iterations;
  for (auto& [col, wv] : sol.support) {
    if (wv <= 1e-12) continue;
    int idx = keep[col];
    out.measure.x.push_back(g.xs[idx / nqn]);
    out.measure.q.push_back(g.qs[idx % nqn]);
    out.measure.w.push_back(wv);
  }

  // Fenchel certificate: a subsolution gradient field paired against any
  // feasible measure bounds the optimum from below.
  double level = -sol.objective;
  double gap = 0.0;
  try {
    double cf = free_critical_value(spec, which).c_f;
    double lvl = std::max(level, cf);
    std::vector<double> field = certificate_field(spec, lvl, g.xs, which);
    double worst = -1e300;
    for (int i = 0; i < nx; ++i) {
      double gv = spec.eval(g.xs[i], field[i], which);
      worst = std::max(worst, gv);
    }
    gap = sol.objective - (-worst);
  } catch (const Error&) {
    gap = std::numeric_limits<double>::quiet_NaN();
  }
  out.dual_gap_proxy = gap;
  return out;
}

std::vector<DiscreteClosedMeasure> equilibrium_mather_G(const HamiltonianSpec& spec,
                                                        const CaseReport& report) {
  double lo = 0.0, hi = 1.0;
  if (!spec.potential.empty) {
    lo = std::min(lo, spec.potential.support_lo - 1.0);
    hi = std::max(hi, spec.potential.support_hi + 1.0);
  }
  auto is_equilibrium = [&](double y) {
    return argmin_p(spec, y, Which::G).value >= report.c_f_G - 1e-7;
  };
  std::vector<double> pts = report.equilibria_G.expand(lo, hi, is_equilibrium);
  std::vector<DiscreteClosedMeasure> out;
  for (double y0 : pts) {
    // Polish the component midpoint before the delta test.
    double y = golden_max([&](double z) { return argmin_p(spec, z, Which::G).value; },
                          y0 - 5e-4, y0 + 5e-4, 1e-13).x;
    double obj = fenchel_lagrangian(spec, y, 0.0, Which::G);
    if (std::abs(obj - (-report.c_f_G)) > 1e-9)
      throw InternalError("equilibrium delta at y=" + std::to_string(y) +
                          " misses -c_f(G): L=" + std::to_string(obj));
    DiscreteClosedMeasure m;
    m.x = {y};
    m.q = {0.0};
    m.w = {1.0};
    out.push_back(std::move(m));
  }
  return out;
}

AppendixReport appendix_counterexample(double eps1, int y_samples) {
  if (!(eps1 > 0.0 && eps1 <= 0.01))
    throw DomainError("appendix_counterexample: eps1 must lie in (0, 0.01]");
  AppendixReport rep;
  rep.eps1 = eps1;
  HamiltonianSpec spec = HamiltonianSpec::appendix_example(eps1);

  rep.c_f = free_critical_value(spec, Which::H).c_f;
  rep.I_plus = mean_momenta(spec, rep.c_f).second;

  auto v = [&](double x) {
    return appendix::eps(x) + (appendix::p1(x) - appendix::p2(x, eps1));
  };
  // gamma' = v(gamma) > 0 everywhere, else the loop construction breaks.
  for (int i = 0; i <= 20000; ++i) {
    if (v(i / 20000.0) <= 0.0)
      throw InternalError("appendix loop speed non-positive at x=" + std::to_string(i / 20000.0));
  }

  // Period of the loop: integrate dt/dx = 1/v by RK4 at step 1e-4.
  {
    const double h = 1e-4;
    const int n = static_cast<int>(std::round(1.0 / h));
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      double x0 = i * h;
      double k1 = 1.0 / v(x0);
      double k2 = 1.0 / v(x0 + 0.5 * h);
      double k3 = k2;
      double k4 = 1.0 / v(x0 + h);
      t += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    rep.gamma_period_T = t;
  }

  // rho: min of v on [0, 0.52] u [0.99, 1]; delta: min of u_y on the slow
  // window, both measured from the constructed data.
  auto scan_min = [&](auto f, double a, double b) {
    double m = 1e300;
    int n = static_cast<int>(std::ceil((b - a) / 1e-5));
    for (int i = 0; i <= n; ++i) m = std::min(m, f(a + (b - a) * i / n));
    return m;
  };
  rep.rho = std::min(scan_min(v, 0.0, 0.52), scan_min(v, 0.99, 1.0));

  auto u_y = [&](double y, double x) {
    return integrate_adaptive([](double z) { return appendix::p1(z); }, y, x, 1e-12, 24);
  };
  double delta = 1e300;
  for (int iy = 0; iy < y_samples; ++iy) {
    double y = -0.01 + 0.02 * iy / (y_samples - 1);
    delta = std::min(delta, scan_min([&](double x) { return u_y(y, x); }, 0.53, 0.97));
  }
  rep.delta = delta;
  rep.paper_bound = -4.0 / rep.rho + rep.delta / (4.0 * eps1);

  // Birkhoff measure of the loop: d mu = dx / (T v(x)); integrals of u_y.
  auto mu_integral = [&](const std::function<double(double)>& f) {
    static const double knots[] = {0.0, 0.01, 0.52, 0.53, 0.97, 0.99, 1.0};
    double s = 0.0;
    for (int k = 0; k + 1 < 7; ++k) {
      s += integrate_adaptive([&](double x) { return f(x) / v(x); }, knots[k], knots[k + 1],
                              1e-11, 32);
    }
    return s / rep.gamma_period_T;
  };

  rep.min_integral = 1e300;
  for (int iy = 0; iy < y_samples; ++iy) {
    double y = -0.01 + 0.02 * iy / (y_samples - 1);
    double val = mu_integral([&](double x) { return u_y(y, x); });
    rep.integrals.emplace_back(y, val);
    rep.min_integral = std::min(rep.min_integral, val);
  }

  // The loop measure pairs to zero against exact gradient fields.
  double r1 = mu_integral([&](double x) { return std::cos(kTwoPi * x) * v(x); });
  double r2 = mu_integral([&](double x) { return std::sin(kTwoPi * x) * v(x); });
  rep.closure_residual = std::max(std::abs(r1), std::abs(r2));
  return rep;
}

}  // namespace weakkam
