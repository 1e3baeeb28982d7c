#include "weakkam/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace weakkam {

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::u0_H: return "u0_H";
    case ProfileKind::u0_G: return "u0_G";
    case ProfileKind::periodic_solution: return "periodic_solution";
    case ProfileKind::strict_subsolution_vG: return "strict_subsolution_vG";
  }
  return "?";
}

double subsolution_excess(const HamiltonianSpec& spec, const CriticalProfile& profile,
                          Which which) {
  const Grid1D& g = profile.grid;
  const Eigen::ArrayXd& u = profile.values;
  const double dx = g.dx();
  double worst = -1e300;
  for (int i = 1; i + 1 < g.n; ++i) {
    double dm = (u[i] - u[i - 1]) / dx;
    double dp = (u[i + 1] - u[i]) / dx;
    double gv = std::max(spec.eval(g.node(i), dm, which), spec.eval(g.node(i), dp, which));
    // Slope-variation bound from the least-kinked nearby stencil, so an
    // isolated derivative jump does not inflate the tolerance estimate.
    double curv = std::abs(u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
    if (i >= 2) curv = std::min(curv, std::abs(u[i] - 2.0 * u[i - 1] + u[i - 2]) / (dx * dx));
    if (i + 2 < g.n) curv = std::min(curv, std::abs(u[i + 2] - 2.0 * u[i + 1] + u[i]) / (dx * dx));
    double tol = 5.0 * dx * (1.0 + curv);
    worst = std::max(worst, gv - profile.level - tol);
  }
  return worst;
}

namespace {

SemidistanceCache make_cache(const HamiltonianSpec& spec, Which which, double level,
                             const Grid1D& grid) {
  double lo = std::min(grid.x_lo, 0.0) - 1.25;
  double hi = std::max(grid.x_hi, 1.0) + 1.25;
  return SemidistanceCache(spec, which, level, lo, hi);
}

Eigen::ArrayXd equilibrium_envelope(const SemidistanceCache& S, const EquilibriumSet& eq,
                                    const Grid1D& grid) {
  Eigen::ArrayXd out(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.node(i);
    double best = 1e300;
    for (double y : eq.expand(x - 1.0, x + 1.0)) best = std::min(best, S(y, x));
    if (best >= 1e300) throw InternalError("empty obstacle set in equilibrium envelope");
    out[i] = best;
  }
  return out;
}

}  // namespace

CriticalProfile periodic_critical_solution(const HamiltonianSpec& spec, const CaseReport& report,
                                           const Grid1D& grid) {
  CriticalProfile p;
  p.grid = grid;
  p.level = report.c_H;
  p.kind = ProfileKind::periodic_solution;
  p.values.resize(grid.n);
  if (report.c_H > report.c_f_H + kTolLevel) {
    bool use_plus = std::abs(report.P_H_plus) <= kTolMean;
    bool use_minus = std::abs(report.P_H_minus) <= kTolMean;
    if (!use_plus && !use_minus)
      throw ClassificationError("periodic solution needs a zero-mean bracket endpoint",
                                report.c_f_H, report.c_H, report.c_f_G, report.c_G);
    SemidistanceCache S = make_cache(spec, Which::H, report.c_H, grid);
    for (int i = 0; i < grid.n; ++i) {
      double x = grid.node(i);
      p.values[i] = use_plus ? S.cum_plus(x) - S.cum_plus(0.0)
                             : S.cum_minus(x) - S.cum_minus(0.0);
    }
  } else {
    SemidistanceCache S = make_cache(spec, Which::H, report.c_H, grid);
    p.values = equilibrium_envelope(S, report.equilibria_H, grid);
  }
  return p;
}

CriticalProfile u0_H(const HamiltonianSpec& spec, const CaseReport& report, const Grid1D& grid) {
  CriticalProfile p;
  p.grid = grid;
  p.level = report.c_H;
  p.kind = ProfileKind::u0_H;

  if (report.c_H > report.c_f_H + kTolLevel) {
    // Case II: primitive of the zero-mean bracket endpoint, with the
    // additive constant fixed by zero average against the LP Mather measure.
    bool use_plus = std::abs(report.P_H_plus) <= kTolMean;
    SemidistanceCache S = make_cache(spec, Which::H, report.c_H, grid);
    auto prim = [&](double x) {
      return use_plus ? S.cum_plus(x) - S.cum_plus(0.0) : S.cum_minus(x) - S.cum_minus(0.0);
    };
    LPResult lp = closed_measure_lp(spec, LpDomain::H_on_torus);
    double shift = lp.measure.average(prim);
    p.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) p.values[i] = prim(grid.node(i)) - shift;
    p.condition_u = ConditionUStatus::verified_interior;
    return p;
  }

  // c(H) = c_f(H): equilibrium envelope of S_H; condition (U) hypotheses.
  auto [im, ip] = mean_momenta(spec, report.c_H);
  if (im < -kTolMean && ip > kTolMean) {
    p.condition_u = ConditionUStatus::verified_interior;
  } else if (spec.family == Family::quadratic) {
    p.condition_u = ConditionUStatus::verified_tonelli;
  } else {
    p.condition_u = ConditionUStatus::unverifiable;
  }
  SemidistanceCache S = make_cache(spec, Which::H, report.c_H, grid);
  p.values = equilibrium_envelope(S, report.equilibria_H, grid);
  return p;
}

CriticalProfile u0_G_envelope(const HamiltonianSpec& spec, const CaseReport& report,
                              const CriticalProfile& u0H, const Grid1D& grid) {
  CriticalProfile p;
  p.grid = grid;
  p.level = report.c_G;
  p.kind = ProfileKind::u0_G;
  p.condition_u = u0H.condition_u;
  p.values.resize(grid.n);

  switch (report.case_tag) {
    case CaseTag::I:
    case CaseTag::III: {
      SemidistanceCache S = make_cache(spec, Which::G, report.c_G, grid);
      if (report.case_tag == CaseTag::I) {
        // All obstacles sit inside supp(V); no window reduction applies.
        double lo = grid.x_lo - 1.0, hi = grid.x_hi + 1.0;
        std::vector<double> ys = report.equilibria_G.expand(lo, hi);
        if (ys.empty()) throw InternalError("case I: empty obstacle set");
        for (int i = 0; i < grid.n; ++i) {
          double x = grid.node(i);
          double best = 1e300;
          for (double y : ys) best = std::min(best, S(y, x));
          p.values[i] = best;
        }
      } else {
        p.values = equilibrium_envelope(S, report.equilibria_G, grid);
      }
      break;
    }
    case CaseTag::II_A:
    case CaseTag::II_B: {
      if (spec.potential.empty)
        throw InternalError("case II envelope requires a nontrivial potential");
      SemidistanceCache S = make_cache(spec, Which::G, report.c_G, grid);
      const bool A = report.case_tag == CaseTag::II_A;
      const double y_end = A ? spec.potential.support_lo : spec.potential.support_hi;
      const double g_end = u0H(y_end);
      for (int i = 0; i < grid.n; ++i) {
        double x = grid.node(i);
        bool outside = A ? (x <= y_end) : (x >= y_end);
        double val = outside ? u0H(x) : g_end + S(y_end, x);
        if (report.mather_constraint_active) {
          for (double y : report.equilibria_G.expand(x - 1.0, x + 1.0))
            val = std::min(val, S(y, x));
        }
        p.values[i] = val;
      }
      break;
    }
  }

  // Growth sanity per case: coercive in case I, bounded otherwise.
  if (report.case_tag == CaseTag::I) {
    double C = 1.0;
    bool ok = false;
    for (; C > 1e-6; C *= 0.5) {
      ok = true;
      for (int i = 0; i < grid.n && ok; ++i)
        ok = p.values[i] >= C * std::abs(grid.node(i)) - 1.0 / C;
      if (ok) break;
    }
    if (!ok) throw InternalError("case I envelope failed the coercive lower bound fit");
  } else {
    double bound = p.values.abs().maxCoeff();
    double kappa = 0.0;
    for (int i = 0; i < 64; ++i) {
      SublevelBracket b = sublevel_bracket(spec, i / 64.0, report.c_G, Which::H);
      kappa = std::max({kappa, std::abs(b.p_minus), std::abs(b.p_plus)});
    }
    if (bound > 10.0 * (kappa + 1.0))
      throw InternalError("bounded-case envelope grew beyond the Lipschitz scale");
  }
  return p;
}

StrictSubsolution strict_subsolution_vG(const HamiltonianSpec& spec, const CaseReport& report,
                                        const Grid1D& grid) {
  if (report.case_tag != CaseTag::I)
    throw CaseError("strict_subsolution_vG is defined in case I only");
  StrictSubsolution out;
  out.delta = report.c_G - report.c_H;

  SemidistanceCache SG = make_cache(spec, Which::G, report.c_G, grid);
  CriticalProfile uH = periodic_critical_solution(spec, report, grid);

  Eigen::ArrayXd w(grid.n);
  for (int i = 0; i < grid.n; ++i) w[i] = SG(0.0, grid.node(i));

  // Smallest k (by doubling) with the coercive branch active near supp(V).
  double n_lo = spec.potential.empty ? -0.25 : spec.potential.support_lo - 0.25;
  double n_hi = spec.potential.empty ? 0.25 : spec.potential.support_hi + 0.25;
  double k = 1.0;
  for (int iter = 0; iter < 60; ++iter, k *= 2.0) {
    bool covers = true;
    for (int i = 0; i < grid.n && covers; ++i) {
      double x = grid.node(i);
      if (x >= n_lo && x <= n_hi) covers = uH.values[i] + k >= w[i];
    }
    if (covers) break;
  }

  Eigen::ArrayXd v = w.min(uH.values + k);
  double shift = v.maxCoeff();
  v -= shift;

  out.K_lo = grid.x_hi;
  out.K_hi = grid.x_lo;
  for (int i = 0; i < grid.n; ++i) {
    if (w[i] <= uH.values[i] + k) {
      out.K_lo = std::min(out.K_lo, grid.node(i));
      out.K_hi = std::max(out.K_hi, grid.node(i));
    }
  }

  out.profile.grid = grid;
  out.profile.values = std::move(v);
  out.profile.level = report.c_G;
  out.profile.kind = ProfileKind::strict_subsolution_vG;
  return out;
}

}  // namespace weakkam
