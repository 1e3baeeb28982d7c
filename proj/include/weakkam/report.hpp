#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weakkam/discounted.hpp"
#include "weakkam/occupation.hpp"
#include "weakkam/scenarios.hpp"

namespace weakkam {

inline constexpr int kSchemaVersion = 1;

// Inline family parameters (used when no named scenario is selected).
struct FamilyConfig {
  double theta = 0.0;
  std::string U = "cos";                  // cos | shifted-cos | fourier
  std::vector<double> fourier_cos;        // coefficients for k = 1..K
  std::vector<double> fourier_sin;
  double u_shift = 0.0;                   // shifted-cos: cos(2 pi (x - shift))
  std::optional<double> v_center;
  double v_half_width = 0.0;
  double v_amplitude = 0.0;
};

struct RunConfig {
  std::string scenario = "E3";            // empty = inline family
  std::optional<FamilyConfig> family;
  Grid1D grid{-8.0, 9.0, 8705};
  std::vector<double> lambdas = default_lambda_list();
  double window_lo = -2.0;
  double window_hi = 3.0;
  std::string outputs = "out";
  std::vector<std::string> checks;        // empty = defaults per scenario
  double eps1 = 1e-3;
  unsigned seed = 12345;

  HamiltonianSpec resolve_spec() const;
};

// Locale-independent shortest-round-trip formatting (byte-stable outputs).
std::string format_double(double v);

struct CheckVerdict {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct RunReport {
  int exit_code = 0;
  std::string scenario;
  std::vector<CheckVerdict> verdicts;
  std::string report_path;
};

// Parses a JSON config file plus dotted-path flag overrides
// ("--grid.n", "--lambda-min", ...). Throws ConfigError on malformed input.
RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides);

// Executes classify -> profiles -> lambda sweep -> occupation checks -> LP
// checks as requested and writes report.json, profiles.csv, measures.csv,
// sweep.csv and plot-ready .dat files into the output directory.
RunReport run(const RunConfig& config);

std::string list_scenarios_text();

std::string case_report_to_json(const CaseReport& report);

}  // namespace weakkam
