#include "weakkam/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "weakkam/mather.hpp"

namespace weakkam {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

HamiltonianSpec RunConfig::resolve_spec() const {
  if (!scenario.empty()) {
    HamiltonianSpec s = find_scenario(scenario).spec;
    if (scenario == "appendix") s.eps1 = eps1;
    return s;
  }
  if (!family) throw ConfigError("config needs either a scenario name or inline family");
  const FamilyConfig& f = *family;
  PeriodicFunction U;
  if (f.U == "cos") {
    U = PeriodicFunction::cosine();
  } else if (f.U == "shifted-cos") {
    double shift = f.u_shift;
    U = {[shift](double x) { return std::cos(2.0 * M_PI * (x - shift)); }, "shifted-cos"};
  } else if (f.U == "fourier") {
    auto ac = f.fourier_cos;
    auto as = f.fourier_sin;
    U = {[ac, as](double x) {
           double v = 0.0;
           for (size_t k = 0; k < ac.size(); ++k) v += ac[k] * std::cos(2.0 * M_PI * (k + 1) * x);
           for (size_t k = 0; k < as.size(); ++k) v += as[k] * std::sin(2.0 * M_PI * (k + 1) * x);
           return v;
         },
         "fourier"};
  } else {
    throw ConfigError("unknown U choice '" + f.U + "'");
  }
  PotentialSpec V = PotentialSpec::none();
  if (f.v_center) V = PotentialSpec::bump(*f.v_center, f.v_half_width, f.v_amplitude);
  return HamiltonianSpec::shifted_eikonal(f.theta, std::move(U), std::move(V));
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  ordered_json j;
  if (!json_text.empty()) {
    j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config JSON does not parse");
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (j.contains("grid")) {
      auto& g = j["grid"];
      if (g.contains("x_lo")) cfg.grid.x_lo = g["x_lo"].get<double>();
      if (g.contains("x_hi")) cfg.grid.x_hi = g["x_hi"].get<double>();
      if (g.contains("n")) cfg.grid.n = g["n"].get<int>();
    }
    if (j.contains("lambdas")) cfg.lambdas = j["lambdas"].get<std::vector<double>>();
    if (j.contains("window")) {
      cfg.window_lo = j["window"][0].get<double>();
      cfg.window_hi = j["window"][1].get<double>();
    }
    if (j.contains("outputs")) cfg.outputs = j["outputs"].get<std::string>();
    if (j.contains("checks")) cfg.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("eps1")) cfg.eps1 = j["eps1"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
    if (j.contains("family")) {
      FamilyConfig f;
      auto& fj = j["family"];
      if (fj.contains("theta")) f.theta = fj["theta"].get<double>();
      if (fj.contains("U")) f.U = fj["U"].get<std::string>();
      if (fj.contains("u_shift")) f.u_shift = fj["u_shift"].get<double>();
      if (fj.contains("fourier_cos")) f.fourier_cos = fj["fourier_cos"].get<std::vector<double>>();
      if (fj.contains("fourier_sin")) f.fourier_sin = fj["fourier_sin"].get<std::vector<double>>();
      if (fj.contains("V")) {
        f.v_center = fj["V"]["center"].get<double>();
        f.v_half_width = fj["V"]["half_width"].get<double>();
        f.v_amplitude = fj["V"]["amplitude"].get<double>();
      }
      cfg.family = f;
      if (!j.contains("scenario")) cfg.scenario.clear();
    }
  }

  auto parse_double = [](const std::string& s, const std::string& key) {
    try {
      size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("flag " + key + " expects a number, got '" + s + "'");
    }
  };
  for (auto& [key, value] : overrides) {
    if (key == "scenario") {
      cfg.scenario = value;
    } else if (key == "grid.n") {
      cfg.grid.n = static_cast<int>(parse_double(value, key));
    } else if (key == "grid.x_lo") {
      cfg.grid.x_lo = parse_double(value, key);
    } else if (key == "grid.x_hi") {
      cfg.grid.x_hi = parse_double(value, key);
    } else if (key == "lambda-min") {
      double lmin = parse_double(value, key);
      std::vector<double> kept;
      for (double l : cfg.lambdas)
        if (l >= lmin - 1e-15) kept.push_back(l);
      if (kept.empty() || kept.back() > lmin + 1e-15) kept.push_back(lmin);
      cfg.lambdas = kept;
    } else if (key == "window.lo") {
      cfg.window_lo = parse_double(value, key);
    } else if (key == "window.hi") {
      cfg.window_hi = parse_double(value, key);
    } else if (key == "outputs") {
      cfg.outputs = value;
    } else if (key == "eps1") {
      cfg.eps1 = parse_double(value, key);
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned>(parse_double(value, key));
    } else if (key == "checks") {
      cfg.checks.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) cfg.checks.push_back(item);
    } else {
      throw ConfigError("unknown flag --" + key);
    }
  }
  if (const char* env = std::getenv("WEAKKAM1D_OUT")) cfg.outputs = env;
  return cfg;
}

std::string case_report_to_json(const CaseReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["c_f_H"] = r.c_f_H;
  j["c_H"] = r.c_H;
  j["c_f_G"] = r.c_f_G;
  j["c_G"] = r.c_G;
  j["case_tag"] = to_string(r.case_tag);
  auto eq_json = [](const EquilibriumSet& e) {
    ordered_json arr = ordered_json::array();
    for (const auto& item : e.items) arr.push_back(item.base);
    return arr;
  };
  j["equilibria_H"] = eq_json(r.equilibria_H);
  j["equilibria_G"] = eq_json(r.equilibria_G);
  j["P_H_plus"] = r.P_H_plus;
  j["P_H_minus"] = r.P_H_minus;
  j["rho"] = r.rho;
  j["mather_constraint_active"] = r.mather_constraint_active;
  return j.dump(2);
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string profiles_csv(const std::vector<const CriticalProfile*>& profiles) {
  std::string csv = "x,value,kind,level\n";
  for (const CriticalProfile* p : profiles) {
    for (int i = 0; i < p->grid.n; ++i) {
      csv += format_double(p->grid.node(i));
      csv += ',';
      csv += format_double(p->values[i]);
      csv += ',';
      csv += to_string(p->kind);
      csv += ',';
      csv += format_double(p->level);
      csv += '\n';
    }
  }
  return csv;
}

std::string measures_csv(const MeasureSplit& split) {
  std::string csv = "y,q,w,part\n";
  auto add = [&](const OccupationMeasure& m, int part) {
    for (size_t i = 0; i < m.w.size(); ++i) {
      csv += format_double(m.y[i]);
      csv += ',';
      csv += format_double(m.q[i]);
      csv += ',';
      csv += format_double(m.w[i]);
      csv += ',';
      csv += std::to_string(part);
      csv += '\n';
    }
  };
  add(split.mu1, 1);
  if (split.theta < 1.0) add(split.mu2, 2);
  return csv;
}

std::string trajectory_csv(const Trajectory& t) {
  std::string csv = "t,y,q\n";
  for (const auto& s : t.samples) {
    csv += format_double(s.t);
    csv += ',';
    csv += format_double(s.y);
    csv += ',';
    csv += format_double(s.q);
    csv += '\n';
  }
  return csv;
}

std::string sweep_csv(const ConvergenceTable& t) {
  std::string csv = "lambda,sup_error,iterations,residual,scheme\n";
  for (const auto& row : t.rows) {
    csv += format_double(row.lambda);
    csv += ',';
    csv += format_double(row.sup_error);
    csv += ',';
    csv += std::to_string(row.iterations);
    csv += ',';
    csv += format_double(row.residual);
    csv += ',';
    csv += to_string(row.scheme);
    csv += '\n';
  }
  return csv;
}

}  // namespace

std::string list_scenarios_text() {
  std::string out = "name      case   description\n";
  for (const auto& s : builtin_scenarios()) {
    std::string name = s.name;
    name.resize(10, ' ');
    std::string tag = s.expected_case;
    tag.resize(7, ' ');
    out += name + tag + s.description + "\n";
  }
  return out;
}

RunReport run(const RunConfig& config) {
  RunReport result;
  result.scenario = config.scenario;
  fs::create_directories(config.outputs);
  ordered_json report;
  report["schema_version"] = kSchemaVersion;
  report["scenario"] = config.scenario;

  auto verdict = [&](const std::string& name, bool pass, const std::string& detail) {
    result.verdicts.push_back({name, pass, detail});
    ordered_json v;
    v["name"] = name;
    v["pass"] = pass;
    v["detail"] = detail;
    report["checks"].push_back(v);
    if (!pass) result.exit_code = 1;
  };

  HamiltonianSpec spec = config.resolve_spec();
  std::vector<std::string> checks = config.checks;
  if (checks.empty()) {
    if (config.scenario == "appendix")
      checks = {"classify", "appendix", "lp"};
    else
      checks = {"classify", "profiles", "sweep", "occupation", "lp"};
  }
  auto wants = [&](const std::string& c) {
    return std::find(checks.begin(), checks.end(), c) != checks.end();
  };

  try {
    validate_spec(spec, 3.0 + std::abs(spec.theta));

    CaseReport cr = classify(spec);
    report["case_report"] = ordered_json::parse(case_report_to_json(cr));
    if (wants("classify")) verdict("classify", true, "case " + to_string(cr.case_tag));

    const Grid1D& grid = config.grid;
    CriticalProfile uH, u0;
    std::optional<StrictSubsolution> vG;
    if (wants("profiles") || wants("sweep") || wants("occupation")) {
      uH = u0_H(spec, cr, grid);
      u0 = u0_G_envelope(spec, cr, uH, grid);
      std::vector<const CriticalProfile*> ps{&uH, &u0};
      if (cr.case_tag == CaseTag::I) {
        vG = strict_subsolution_vG(spec, cr, grid);
        ps.push_back(&vG->profile);
      }
      write_file(fs::path(config.outputs) / "profiles.csv", profiles_csv(ps));
      double excess = subsolution_excess(spec, u0, Which::G);
      if (wants("profiles"))
        verdict("profiles.subsolution", excess <= 0.0,
                "u0_G one-sided subsolution excess " + format_double(excess));
    }

    if (wants("sweep")) {
      ConvergenceTable table =
          lambda_sweep(spec, cr, config.lambdas, grid, config.window_lo, config.window_hi);
      write_file(fs::path(config.outputs) / "sweep.csv", sweep_csv(table));
      // Plot-ready block: x, u^lambda columns, u0_G.
      SlConfig scfg;
      switch (cr.case_tag) {
        case CaseTag::II_A: scfg.closure = Closure::periodic_ghost_left; break;
        case CaseTag::II_B: scfg.closure = Closure::periodic_ghost_right; break;
        default: break;
      }
      scfg.table = LagrangianTable::build(spec, grid);
      std::string dat = "# x";
      std::vector<DiscountedSolution> sols;
      for (double lam : config.lambdas) {
        sols.push_back(solve_semilagrangian(spec, lam, cr.c_G, grid, scfg));
        dat += " u_lambda=" + format_double(lam);
      }
      dat += " u0_G\n";
      for (int i = 0; i < grid.n; ++i) {
        dat += format_double(grid.node(i));
        for (auto& s : sols) {
          dat += ' ';
          dat += format_double(s.values[i]);
        }
        dat += ' ';
        dat += format_double(u0.values[i]);
        dat += '\n';
      }
      write_file(fs::path(config.outputs) / "profiles.dat", dat);
      double final_err = table.rows.empty() ? 0.0 : table.rows.back().sup_error;
      verdict("sweep.decay", table.decay_monotone,
              "final sup error " + format_double(final_err));
      ordered_json rows = ordered_json::array();
      for (auto& r : table.rows) {
        ordered_json row;
        row["lambda"] = r.lambda;
        row["sup_error"] = r.sup_error;
        row["iterations"] = r.iterations;
        row["residual"] = r.residual;
        rows.push_back(row);
      }
      report["convergence"] = rows;
    }

    if (wants("occupation")) {
      SlConfig scfg;
      switch (cr.case_tag) {
        case CaseTag::II_A: scfg.closure = Closure::periodic_ghost_left; break;
        case CaseTag::II_B: scfg.closure = Closure::periodic_ghost_right; break;
        default: break;
      }
      double lam = 0.2;
      DiscountedSolution sol = solve_semilagrangian(spec, lam, cr.c_G, grid, scfg);
      std::mt19937 rng(config.seed);
      std::uniform_real_distribution<double> ux(config.window_lo, config.window_hi);
      bool mono_ok = true, vel_ok = true;
      Trajectory last;
      for (int k = 0; k < 8; ++k) {
        Trajectory t = extract_optimal_curve(sol, ux(rng));
        double qmax = spec.q_velocity_bound;
        int sign = 0;
        for (size_t i = 1; i < t.samples.size(); ++i) {
          double dy = t.samples[i].y - t.samples[i - 1].y;
          if (std::abs(t.samples[i].q) > qmax + 1e-12) vel_ok = false;
          if (std::abs(dy) > grid.dx() / 4.0) {
            int s = dy > 0 ? 1 : -1;
            if (sign != 0 && s != sign) mono_ok = false;
            sign = s;
          }
        }
        last = std::move(t);
      }
      verdict("occupation.monotone", mono_ok, "backward curves monotone up to dx/4 jitter");
      verdict("occupation.velocity", vel_ok, "|q| within the declared bound");
      if (!last.samples.empty()) {
        write_file(fs::path(config.outputs) / "trajectory.csv", trajectory_csv(last));
        double r = std::max({std::abs(last.x0) + 0.5,
                             spec.potential.empty ? 1.0 : std::abs(spec.potential.support_lo) + 0.5,
                             spec.potential.empty ? 1.0 : std::abs(spec.potential.support_hi) + 0.5});
        MeasureSplit split = split_at_radius(last, r);
        write_file(fs::path(config.outputs) / "measures.csv", measures_csv(split));
      }
    }

    if (wants("lp")) {
      LPResult torus = closed_measure_lp(spec, LpDomain::H_on_torus);
      double gap = std::abs(torus.optimal_value + cr.c_H);
      verdict("lp.torus", gap <= 1e-3 + 2.0 * (2.0 * spec.q_velocity_bound / 64.0 + 1.0 / 256.0),
              "torus optimum " + format_double(torus.optimal_value));
      if (cr.mather_constraint_active && !spec.potential.empty) {
        LPResult window = closed_measure_lp(spec, LpDomain::G_on_window, {},
                                            spec.potential.support_lo - 1.1,
                                            spec.potential.support_hi + 1.1);
        double wgap = std::abs(window.optimal_value + cr.c_f_G);
        verdict("lp.window",
                wgap <= 1e-3 + 2.0 * (2.0 * spec.q_velocity_bound / 64.0 + 3.0 / 256.0),
                "window optimum " + format_double(window.optimal_value));
      }
    }

    if (wants("appendix")) {
      AppendixReport ar = appendix_counterexample(config.eps1);
      std::string csv = "y,integral\n";
      for (auto& [y, v] : ar.integrals) {
        csv += format_double(y);
        csv += ',';
        csv += format_double(v);
        csv += '\n';
      }
      write_file(fs::path(config.outputs) / "appendix.csv", csv);
      ordered_json aj;
      aj["eps1"] = ar.eps1;
      aj["c_f"] = ar.c_f;
      aj["I_plus"] = ar.I_plus;
      aj["gamma_period_T"] = ar.gamma_period_T;
      aj["rho"] = ar.rho;
      aj["delta"] = ar.delta;
      aj["paper_bound"] = ar.paper_bound;
      aj["min_integral"] = ar.min_integral;
      report["appendix"] = aj;
      verdict("appendix.min_integral", ar.min_integral > 0.0,
              "min integral " + format_double(ar.min_integral));
    }
  } catch (const Error& e) {
    result.exit_code = 1;
    ordered_json err;
    err["type"] = "error";
    err["message"] = e.what();
    report["error"] = err;
  }

  fs::path report_path = fs::path(config.outputs) / "report.json";
  write_file(report_path, report.dump(2) + "\n");
  result.report_path = report_path.string();
  return result;
}

}  // namespace weakkam
