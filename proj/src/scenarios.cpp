#include "weakkam/scenarios.hpp"

namespace weakkam {

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> table = [] {
    std::vector<Scenario> s;
    s.push_back({"E0", "unperturbed eikonal |p| - cos(2 pi x), V = 0", "III",
                 HamiltonianSpec::shifted_eikonal(0.0, PeriodicFunction::cosine(),
                                                  PotentialSpec::none())});
    s.push_back({"E1", "theta = 0, nonpositive bump at 0.5 of depth 0.5", "I",
                 HamiltonianSpec::shifted_eikonal(0.0, PeriodicFunction::cosine(),
                                                  PotentialSpec::bump(0.5, 0.2, -0.5))});
    s.push_back({"E2", "theta = 2, nonnegative bump on [0.1, 0.4], integral 0.05", "II_A",
                 HamiltonianSpec::shifted_eikonal(2.0, PeriodicFunction::cosine(),
                                                  PotentialSpec::bump(0.25, 0.15, 1.0 / 3.0))});
    s.push_back({"E2b", "theta = -2 mirror of E2", "II_B",
                 HamiltonianSpec::shifted_eikonal(-2.0, PeriodicFunction::cosine(),
                                                  PotentialSpec::bump(0.25, 0.15, 1.0 / 3.0))});
    s.push_back({"E3", "theta = 0, nonnegative bump on [0.1, 0.4]", "III",
                 HamiltonianSpec::shifted_eikonal(0.0, PeriodicFunction::cosine(),
                                                  PotentialSpec::bump(0.25, 0.15, 1.0 / 3.0))});
    s.push_back({"appendix", "(p - p1)(p - p2) + eps |p - p1| with breaking condition (U)", "III",
                 HamiltonianSpec::appendix_example(1e-3)});
    return s;
  }();
  return table;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace weakkam
