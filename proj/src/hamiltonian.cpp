#include "weakkam/hamiltonian.hpp"

#include <cmath>

namespace weakkam {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PeriodicFunction PeriodicFunction::cosine() {
  return {[](double x) { return std::cos(kTwoPi * x); }, "cos(2*pi*x)"};
}

PeriodicFunction PeriodicFunction::zero() {
  return {[](double) { return 0.0; }, "0"};
}

PotentialSpec PotentialSpec::none() {
  PotentialSpec v;
  v.eval = [](double) { return 0.0; };
  v.empty = true;
  v.sign_hint = SignHint::mixed;
  return v;
}

PotentialSpec PotentialSpec::bump(double center, double half_width, double amplitude) {
  PotentialSpec v;
  const double pi = 3.14159265358979323846;
  v.eval = [=](double x) {
    double s = (x - center) / half_width;
    if (std::abs(s) >= 1.0) return 0.0;
    double c = std::cos(0.5 * pi * s);
    return amplitude * c * c;
  };
  v.support_lo = center - half_width;
  v.support_hi = center + half_width;
  v.sign_hint = amplitude >= 0.0 ? SignHint::nonneg : SignHint::nonpos;
  v.empty = false;
  return v;
}

namespace appendix {

double p1(double x) { return -std::cos(kTwoPi * x); }

double eps(double x) {
  double t = x - std::floor(x);
  const double a = 0.01;
  if (t <= a) return a * (1.0 - t / a);
  if (t >= 1.0 - a) return a * (1.0 - (1.0 - t) / a);
  return 0.0;
}

namespace {
// Cubic Hermite with zero end slopes: monotone between the endpoint values.
double smooth_join(double t, double v0, double v1) {
  double s = t * t * (3.0 - 2.0 * t);
  return v0 + (v1 - v0) * s;
}
}  // namespace

double p2(double x, double eps1) {
  double t = x - std::floor(x);
  const double l0 = 0.5 + 0.02;   // p2 = -1 up to here
  const double l1 = 0.5 + 0.03;   // p2 = p1 - eps1 from here
  const double r1 = 1.0 - 0.03;   // ... up to here
  const double r0 = 1.0 - 0.01;   // p2 = -1 from here on
  double raw;
  if (t <= l0 || t >= r0) {
    raw = -1.0;
  } else if (t >= l1 && t <= r1) {
    raw = p1(t) - eps1;
  } else if (t < l1) {
    raw = smooth_join((t - l0) / (l1 - l0), -1.0, p1(l1) - eps1);
  } else {
    raw = smooth_join((t - r1) / (r0 - r1), p1(r1) - eps1, -1.0);
  }
  // Keep p2 strictly below p1 on (0,1); the margin shrinks with eps1.
  double margin = 0.5 * std::min(eps1, 0.01);
  if (t > 0.0 && t < 1.0) raw = std::min(raw, p1(t) - margin);
  return raw;
}

double hamiltonian(double x, double p, double eps1) {
  double q1 = p1(x);
  double q2 = p2(x, eps1);
  return (p - q1) * (p - q2) + eps(x) * std::abs(p - q1);
}

}  // namespace appendix

double HamiltonianSpec::base(double x, double p) const {
  switch (family) {
    case Family::shifted_eikonal:
      return std::abs(theta + p) - U.eval(x);
    case Family::quadratic:
      return 0.5 * p * p - U.eval(x);
    case Family::appendix_example:
      return appendix::hamiltonian(x, p, eps1);
    case Family::custom:
      return custom(x, p);
  }
  return 0.0;
}

double HamiltonianSpec::eval(double x, double p, Which which) const {
  switch (which) {
    case Which::H:
      return base(x, p);
    case Which::V:
      return potential(x);
    case Which::G:
      return base(x, p) - potential(x);
  }
  return 0.0;
}

HamiltonianSpec HamiltonianSpec::shifted_eikonal(double theta, PeriodicFunction U, PotentialSpec V) {
  HamiltonianSpec s;
  s.family = Family::shifted_eikonal;
  s.theta = theta;
  s.U = std::move(U);
  s.potential = std::move(V);
  s.p_search_bound = 8.0 + std::abs(theta);
  s.q_velocity_bound = 4.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::quadratic(PeriodicFunction U, PotentialSpec V) {
  HamiltonianSpec s;
  s.family = Family::quadratic;
  s.U = std::move(U);
  s.potential = std::move(V);
  s.p_search_bound = 8.0;
  s.q_velocity_bound = 4.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::appendix_example(double eps1) {
  HamiltonianSpec s;
  s.family = Family::appendix_example;
  s.eps1 = eps1;
  s.U = PeriodicFunction::zero();
  s.potential = PotentialSpec::none();
  s.p_search_bound = 8.0;
  s.q_velocity_bound = 4.0;
  return s;
}

double eval(const HamiltonianSpec& spec, double x, double p, Which which) {
  if (!std::isfinite(x) || !std::isfinite(p)) {
    throw EvaluationError("non-finite argument (x=" + std::to_string(x) +
                          ", p=" + std::to_string(p) + ")");
  }
  double v = spec.eval(x, p, which);
  if (!std::isfinite(v)) {
    throw EvaluationError("non-finite Hamiltonian value at (x=" + std::to_string(x) +
                          ", p=" + std::to_string(p) + ")");
  }
  return v;
}

double fenchel_lagrangian(const HamiltonianSpec& spec, double x, double q, Which which) {
  const double P = spec.p_search_bound;
  auto obj = [&](double p) { return p * q - spec.eval(x, p, which); };
  // The objective is concave in p, so a positive outward slope at either
  // search boundary means the true transform is +infinity (e.g. eikonal
  // with |q| > 1). A zero outward slope (plateau, |q| = 1) stays finite.
  const double delta = 1e-7 * P;
  const double slope_tol = 1e-9 * (1.0 + std::abs(q));
  if ((obj(P) - obj(P - delta)) / delta > slope_tol) return kLagrangianInf;
  if ((obj(-P) - obj(-P + delta)) / delta > slope_tol) return kLagrangianInf;
  ScalarOpt best = golden_max(obj, -P, P);
  return std::max({best.value, obj(P), obj(-P)});
}

double fenchel_lagrangian(const LagrangianView& view, double x, double q) {
  if (std::abs(q) > view.q_domain) {
    throw DomainError("velocity " + std::to_string(q) + " outside [-Q_max, Q_max]");
  }
  return fenchel_lagrangian(*view.source, x, q);
}

ScalarOpt argmin_p(const HamiltonianSpec& spec, double x, Which which) {
  const double P = spec.p_search_bound;
  auto f = [&](double p) { return spec.eval(x, p, which); };
  ScalarOpt best = golden_min(f, -P, P);
  if (P - std::abs(best.x) < 1e-6) {
    throw CoercivityError("argmin_p at search boundary, P_max=" + std::to_string(P) +
                          " too small (x=" + std::to_string(x) + ")");
  }
  return best;
}

void validate_spec(const HamiltonianSpec& spec, double max_level) {
  const double P = spec.p_search_bound;
  // Periodicity of the base Hamiltonian.
  for (int i = 0; i < 64; ++i) {
    double x = -2.0 + 5.0 * i / 63.0;
    double p = -P + 2.0 * P * ((i * 29) % 64) / 63.0;
    double a = spec.base(x, p);
    double b = spec.base(x + 1.0, p);
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
      throw EvaluationError("base Hamiltonian not 1-periodic at x=" + std::to_string(x));
  }
  // Midpoint convexity in p.
  for (int i = 0; i < 32; ++i) {
    double x = i / 32.0;
    for (int j = 0; j < 16; ++j) {
      double p1 = -P + 2.0 * P * j / 16.0;
      double p3 = p1 + P / 8.0;
      double mid = spec.base(x, 0.5 * (p1 + p3));
      if (mid > 0.5 * (spec.base(x, p1) + spec.base(x, p3)) + 1e-10)
        throw EvaluationError("convexity in p violated at x=" + std::to_string(x));
    }
  }
  // Coercivity at the declared bound relative to the levels in play.
  for (int i = 0; i < 64; ++i) {
    double x = i / 64.0;
    if (spec.base(x, P) <= max_level || spec.base(x, -P) <= max_level)
      throw CoercivityError("H(x, +-P_max) does not dominate level " + std::to_string(max_level));
  }
  // Potential: compact support and continuity on samples.
  if (!spec.potential.empty) {
    double lo = spec.potential.support_lo, hi = spec.potential.support_hi;
    for (int i = 0; i < 64; ++i) {
      double t = static_cast<double>(i) / 63.0;
      double inside = spec.potential(lo + t * (hi - lo));
      if (!std::isfinite(inside)) throw EvaluationError("potential not finite inside support");
      double outside = spec.potential(hi + 0.5 + t);
      if (std::abs(outside) > 1e-12) throw EvaluationError("potential nonzero outside support");
      outside = spec.potential(lo - 0.5 - t);
      if (std::abs(outside) > 1e-12) throw EvaluationError("potential nonzero outside support");
    }
  }
}

}  // namespace weakkam
