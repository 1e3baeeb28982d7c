#include "weakkam/sublevel.hpp"

#include <algorithm>
#include <cmath>

namespace weakkam {

std::vector<double> EquilibriumSet::expand(double lo, double hi,
                                           const std::function<bool(double)>& keep) const {
  std::vector<double> out;
  for (const auto& e : items) {
    if (!e.periodic) {
      if (e.base >= lo && e.base <= hi) {
        if (!keep || keep(e.base)) out.push_back(e.base);
      }
      continue;
    }
    double k0 = std::ceil(lo - e.base);
    for (double k = k0; e.base + k <= hi; k += 1.0) {
      double y = e.base + k;
      if (!keep || keep(y)) out.push_back(y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::I: return "I";
    case CaseTag::II_A: return "II_A";
    case CaseTag::II_B: return "II_B";
    case CaseTag::III: return "III";
  }
  return "?";
}

SublevelBracket sublevel_bracket(const HamiltonianSpec& spec, double x, double a, Which which) {
  ScalarOpt bottom = argmin_p(spec, x, which);
  if (a < bottom.value - 1e-12) throw EmptySublevel(x, a, bottom.value);
  if (a <= bottom.value) return {x, a, bottom.x, bottom.x};
  const double P = spec.p_search_bound;
  auto f = [&](double p) { return spec.eval(x, p, which); };
  double hi = f(P), lo = f(-P);
  if (hi <= a || lo <= a)
    throw CoercivityError("sublevel at a=" + std::to_string(a) + " reaches the search bound");
  double p_plus = bisect(f, bottom.x, P, a, 1e-11);
  double p_minus = bisect(f, -P, bottom.x, a, 1e-11);
  return {x, a, p_minus, p_plus};
}

double support_sigma(const SublevelBracket& bracket, double q) {
  return q >= 0.0 ? q * bracket.p_plus : q * bracket.p_minus;
}

namespace {

double min_value(const HamiltonianSpec& spec, double x, Which which) {
  return argmin_p(spec, x, which).value;
}

struct Component {
  double lo, hi;
};

// Connected components of {m >= threshold} over the sampled values.
std::vector<Component> level_components(const std::vector<double>& xs,
                                        const std::vector<double>& ms, double threshold) {
  std::vector<Component> comps;
  bool in = false;
  double start = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    bool above = ms[i] >= threshold;
    if (above && !in) {
      in = true;
      start = xs[i];
    } else if (!above && in) {
      in = false;
      comps.push_back({start, xs[i - 1]});
    }
  }
  if (in) comps.push_back({start, xs.back()});
  return comps;
}

// 3-point parabolic refinement of a sampled maximum.
double refine_max(const std::function<double(double)>& f, double x0, double x1,
                  double f0, double f1, double f2) {
  double denom = (f0 - 2.0 * f1 + f2);
  if (std::abs(denom) < 1e-300) return f1;
  double h = x1 - x0;
  double shift = 0.5 * h * (f0 - f2) / denom;
  if (std::abs(shift) > h) return f1;
  return std::max(f1, f(x1 + shift));
}

}  // namespace

FreeCriticalResult free_critical_value(const HamiltonianSpec& spec, Which which,
                                       int grid_per_unit) {
  auto m = [&](double x) { return min_value(spec, x, which); };

  // Periodic part: scan one period of the base.
  int n = grid_per_unit;
  std::vector<double> xs(n), ms(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(i) / n;
    ms[i] = argmin_p(spec, xs[i], Which::H).value;
  }
  double c_base = -1e300;
  auto mh = [&](double x) { return min_value(spec, x, Which::H); };
  for (int i = 0; i < n; ++i) {
    int il = (i + n - 1) % n, ir = (i + 1) % n;
    if (ms[i] >= ms[il] && ms[i] >= ms[ir]) {
      double v = refine_max(mh, xs[i] - 1.0 / n, xs[i], ms[il], ms[i], ms[ir]);
      c_base = std::max(c_base, v);
    }
  }

  double c_f = c_base;
  std::vector<double> vx, vm;
  bool has_potential = !spec.potential.empty && which == Which::G;
  if (has_potential) {
    double lo = spec.potential.support_lo - 0.5;
    double hi = spec.potential.support_hi + 0.5;
    int nv = static_cast<int>(std::ceil((hi - lo) * grid_per_unit)) + 1;
    vx.resize(nv);
    vm.resize(nv);
    for (int i = 0; i < nv; ++i) {
      vx[i] = lo + (hi - lo) * i / (nv - 1);
      vm[i] = m(vx[i]);
    }
    for (int i = 1; i + 1 < nv; ++i) {
      if (vm[i] >= vm[i - 1] && vm[i] >= vm[i + 1]) {
        double v = refine_max(m, vx[i - 1], vx[i], vm[i - 1], vm[i], vm[i + 1]);
        c_f = std::max(c_f, v);
      }
    }
  }

  FreeCriticalResult result;
  result.c_f = c_f;

  // Periodic equilibria survive only when the periodic part attains c_f.
  if (which == Which::H || c_base >= c_f - kTolEquil) {
    // Circular component detection over one period: rotate so that the scan
    // starts at a below-threshold sample if one exists.
    int start = 0;
    for (int i = 0; i < n; ++i) {
      if (ms[i] < c_f - kTolEquil) {
        start = i;
        break;
      }
    }
    std::vector<double> rx(n), rm(n);
    for (int i = 0; i < n; ++i) {
      int j = (start + i) % n;
      rx[i] = xs[j] + (start + i >= n ? 1.0 : 0.0);
      rm[i] = ms[j];
    }
    for (auto& comp : level_components(rx, rm, c_f - kTolEquil)) {
      double mid = 0.5 * (comp.lo + comp.hi);
      mid -= std::floor(mid);
      result.equilibria.items.push_back({mid, true});
    }
  }

  if (has_potential) {
    auto near_periodic_copy = [&](double y) {
      for (const auto& e : result.equilibria.items) {
        if (!e.periodic) continue;
        double d = y - e.base;
        if (std::abs(d - std::round(d)) < 2.0 / grid_per_unit) return true;
      }
      return false;
    };
    for (auto& comp : level_components(vx, vm, c_f - kTolEquil)) {
      double mid = 0.5 * (comp.lo + comp.hi);
      if (!near_periodic_copy(mid)) result.equilibria.items.push_back({mid, false});
    }
  }

  std::sort(result.equilibria.items.begin(), result.equilibria.items.end(),
            [](const Equilibrium& a, const Equilibrium& b) { return a.base < b.base; });
  return result;
}

namespace {

// Composite Simpson of the base-H bracket endpoint over one period, with
// adaptive refinement on panels where the bracket degenerates (square-root
// behavior of p+- near equilibria).
std::pair<double, double> mean_momenta_impl(const HamiltonianSpec& spec, double a, int panels) {
  auto bracket = [&](double x) { return sublevel_bracket(spec, x, a, Which::H); };
  int n = panels;  // panels must be even for Simpson pairs
  if (n % 2 != 0) ++n;
  double h = 1.0 / n;
  std::vector<double> pm(n + 1), pp(n + 1), width(n + 1);
  for (int i = 0; i <= n; ++i) {
    SublevelBracket b = bracket(i * h);
    pm[i] = b.p_minus;
    pp[i] = b.p_plus;
    width[i] = b.width();
  }
  double i_minus = 0.0, i_plus = 0.0;
  for (int i = 0; i + 2 <= n; i += 2) {
    bool degenerate = width[i] < 1e-6 || width[i + 1] < 1e-6 || width[i + 2] < 1e-6;
    double x0 = i * h, x2 = (i + 2) * h;
    if (!degenerate) {
      i_minus += h / 3.0 * (pm[i] + 4.0 * pm[i + 1] + pm[i + 2]);
      i_plus += h / 3.0 * (pp[i] + 4.0 * pp[i + 1] + pp[i + 2]);
    } else {
      i_minus += integrate_adaptive([&](double x) { return bracket(x).p_minus; }, x0, x2, 1e-12, 28);
      i_plus += integrate_adaptive([&](double x) { return bracket(x).p_plus; }, x0, x2, 1e-12, 28);
    }
  }
  return {i_minus, i_plus};
}

}  // namespace

std::pair<double, double> mean_momenta(const HamiltonianSpec& spec, double a, int panels) {
  return mean_momenta_impl(spec, a, panels);
}

double effective_hamiltonian(const HamiltonianSpec& spec, double theta, double tol) {
  double c_f = free_critical_value(spec, Which::H).c_f;
  auto contains = [&](double a) {
    auto [im, ip] = mean_momenta(spec, a);
    return im <= theta && theta <= ip;
  };
  if (contains(c_f)) return c_f;
  double lo = c_f, hi = c_f + 1.0;
  const double cap = c_f + 1e6;
  while (!contains(hi)) {
    lo = hi;
    hi = c_f + 2.0 * (hi - c_f);
    if (hi > cap) throw UnboundedSearch("effective Hamiltonian bisection exceeded level cap");
  }
  // I_plus nondecreasing and I_minus nonincreasing in a make the inclusion
  // monotone, so plain bisection applies.
  for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (contains(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

CaseReport classify(const HamiltonianSpec& spec) {
  CaseReport r;
  auto fh = free_critical_value(spec, Which::H);
  r.c_f_H = fh.c_f;
  r.equilibria_H = fh.equilibria;
  auto fg = free_critical_value(spec, Which::G);
  r.c_f_G = fg.c_f;
  r.equilibria_G = fg.equilibria;

  r.c_H = effective_hamiltonian(spec, 0.0);
  // The unique value consistent with the trichotomy: c_f_G in case I,
  // c_H in cases II/III.
  r.c_G = std::max(r.c_H, r.c_f_G);
  r.mather_constraint_active = std::abs(r.c_G - r.c_f_G) <= kTolLevel;

  auto [im, ip] = mean_momenta(spec, r.c_H);
  r.P_H_minus = im;
  r.P_H_plus = ip;

  double rho = 1e300;
  const int n = 2048;
  for (int i = 0; i < n; ++i) {
    SublevelBracket b = sublevel_bracket(spec, static_cast<double>(i) / n, r.c_H, Which::H);
    rho = std::min(rho, b.width());
  }
  r.rho = rho;

  if (r.c_G > r.c_H + kTolLevel) {
    r.case_tag = CaseTag::I;
  } else if (std::abs(r.c_H - r.c_f_H) <= kTolLevel) {
    r.case_tag = CaseTag::III;
  } else {
    bool a_zero = std::abs(r.P_H_plus) <= kTolMean;
    bool b_zero = std::abs(r.P_H_minus) <= kTolMean;
    if (a_zero && b_zero)
      throw ClassificationError("degenerate case II: both mean momenta vanish", r.c_f_H, r.c_H,
                                r.c_f_G, r.c_G);
    if (!a_zero && !b_zero)
      throw ClassificationError("ambiguous case II: neither mean momentum vanishes", r.c_f_H,
                                r.c_H, r.c_f_G, r.c_G);
    r.case_tag = a_zero ? CaseTag::II_A : CaseTag::II_B;
  }
  return r;
}

}  // namespace weakkam
