#pragma once

#include <string>
#include <vector>

#include "weakkam/hamiltonian.hpp"

namespace weakkam {

struct Scenario {
  std::string name;
  std::string description;
  std::string expected_case;  // informational
  HamiltonianSpec spec;
};

// Built-in scenario registry:
//   E0       periodic-only (V == 0), degenerate case III
//   E1       nonpositive bump, case I
//   E2       theta = 2, nonnegative bump, case II-A
//   E2b      theta = -2 mirror, case II-B
//   E3       theta = 0, nonnegative bump, case III
//   appendix product-form Hamiltonian with the failing condition (U)
const std::vector<Scenario>& builtin_scenarios();

const Scenario& find_scenario(const std::string& name);

}  // namespace weakkam
