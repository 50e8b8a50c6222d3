#include "linkage/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "linkage/equilibrium.hpp"
#include "linkage/gaussian_engine.hpp"
#include "linkage/mv_oracle.hpp"
#include "linkage/number_format.hpp"
#include "linkage/scenario_json.hpp"
#include "linkage/verify.hpp"
#include "linkage/welfare.hpp"

namespace linkage {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "value,regime,entry_prob,effort,mv,welfare,consumer_surplus,profit";

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::FullEntry: return "full_entry";
    case Regime::MixedEntry: return "mixed_entry";
    case Regime::Benchmark: return "benchmark";
  }
  return "full_entry";
}

struct ResultRow {
  double value = 0.0;
  std::string regime;
  double entry_prob = 1.0;
  double effort = 0.0;
  double mv = 0.0;
  double welfare = 0.0;
  double consumer_surplus = 0.0;
  double profit = 0.0;
};

ResultRow solve_row(const Scenario& s, double value) {
  const Equilibrium eq = solve_equilibrium(s, s.population);
  const WelfareReport report = welfare(s, eq);
  ResultRow row;
  row.value = value;
  row.regime = regime_name(eq.regime);
  row.entry_prob = eq.entry_prob;
  row.effort = eq.effort;
  row.mv = cost_deriv(s.cost, eq.effort);  // equilibrium marginal value
  row.welfare = report.total;
  row.consumer_surplus = report.consumer;
  row.profit = report.profit;
  return row;
}

// Sweeping the count of observed linkages needs a multi-segment layout; it is
// derived from the scenario by splitting the common variance into J equal
// segments, each of the scenario's population and idiosyncratic variances.
ResultRow observed_m_row(const Scenario& s, std::int64_t m, std::int64_t j) {
  if (!s.is_gaussian() || s.kind == LinkageKind::NoLinkage) {
    throw DomainError(
        "observed_m sweeps need a Gaussian quality or circumstance scenario");
  }
  const GaussianParams& p = *s.gaussian;
  const bool quality = s.kind == LinkageKind::Quality;
  const double common_total =
      quality ? p.var_common_type : p.var_common_shock;
  if (!(common_total > 0.0)) {
    throw DomainError("observed_m sweeps need a positive common variance");
  }
  MultiLinkSpec spec;
  for (std::int64_t k = 0; k < j; ++k) {
    spec.segments.push_back(SegmentSpec{common_total / double(j), s.population,
                                        p.var_idio_type, p.var_idio_shock});
  }
  spec.observed_m = m;
  spec.agent0_var_idio_type = quality ? p.var_idio_type : p.type_variance();
  spec.agent0_var_idio_shock = quality ? p.shock_variance() : p.var_idio_shock;
  const double mv = mv_multilink(spec, s.kind);
  const double effort = cost_deriv_inverse(s.cost, mv);
  Equilibrium eq;
  eq.regime = Regime::FullEntry;
  eq.entry_prob = 1.0;
  eq.effort = effort;
  const WelfareReport report = welfare(s, eq);
  ResultRow row;
  row.value = double(m);
  row.regime = regime_name(eq.regime);
  row.entry_prob = 1.0;
  row.effort = effort;
  row.mv = mv;
  row.welfare = report.total;
  row.consumer_surplus = report.consumer;
  row.profit = report.profit;
  return row;
}

std::vector<ResultRow> sweep_rows(const Scenario& s, const SweepSpec& sweep) {
  std::vector<ResultRow> rows;
  rows.reserve(sweep.values.size());
  std::int64_t max_m = 0;
  if (sweep.variable == SweepVariable::ObservedM) {
    for (double v : sweep.values) {
      max_m = std::max(max_m, std::int64_t(std::llround(v)));
    }
    if (max_m < 1) throw DomainError("observed_m sweep needs values >= 1");
  }
  for (double value : sweep.values) {
    switch (sweep.variable) {
      case SweepVariable::Population: {
        const std::int64_t n = std::int64_t(std::llround(value));
        if (n < 1) throw DomainError("population sweep values must be >= 1");
        rows.push_back(solve_row(s.with_population(n), value));
        break;
      }
      case SweepVariable::Reward:
        rows.push_back(solve_row(s.with_reward(value), value));
        break;
      case SweepVariable::GammaScale: {
        // population-scale factor: an upward shift of the population size
        // distribution, rendered as ceil(value * N)
        if (!(value > 0.0)) {
          throw DomainError("gamma_scale sweep values must be positive");
        }
        const std::int64_t n = std::max<std::int64_t>(
            1, std::int64_t(std::ceil(value * double(s.population))));
        ResultRow row = solve_row(s.with_population(n), value);
        rows.push_back(row);
        break;
      }
      case SweepVariable::ObservedM: {
        const std::int64_t m = std::int64_t(std::llround(value));
        if (m < 0 || m > max_m) {
          throw DomainError("observed_m values must lie in [0, max]");
        }
        rows.push_back(observed_m_row(s, m, max_m));
        break;
      }
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& row : rows) {
    out += format_double(row.value);
    out += ',';
    out += row.regime;
    out += ',';
    out += format_double(row.entry_prob);
    out += ',';
    out += format_double(row.effort);
    out += ',';
    out += format_double(row.mv);
    out += ',';
    out += format_double(row.welfare);
    out += ',';
    out += format_double(row.consumer_surplus);
    out += ',';
    out += format_double(row.profit);
    out += '\n';
  }
  return out;
}

json row_to_json(const ResultRow& row) {
  return json{{"value", row.value},
              {"regime", row.regime},
              {"entry_prob", row.entry_prob},
              {"effort", row.effort},
              {"mv", row.mv},
              {"welfare", row.welfare},
              {"consumer_surplus", row.consumer_surplus},
              {"profit", row.profit}};
}

void write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw StructuralError("cannot open output file: " + out_path);
  out << payload;
}

int run_checked(const RunSpec& spec) {
  if (spec.sweep.has_value() != (spec.command == Command::Sweep)) {
    throw StructuralError("sweep settings are given iff the command is sweep");
  }
  const Scenario scenario = load_scenario(spec.scenario_path);

  switch (spec.command) {
    case Command::Solve: {
      const std::vector<ResultRow> rows{
          solve_row(scenario, double(scenario.population))};
      write_output(spec.format == OutputFormat::Csv
                       ? rows_to_csv(rows)
                       : row_to_json(rows.front()).dump(2) + "\n",
                   spec.out_path);
      return 0;
    }
    case Command::Sweep: {
      if (spec.sweep->values.empty()) {
        throw StructuralError("sweep needs at least one value");
      }
      const std::vector<ResultRow> rows = sweep_rows(scenario, *spec.sweep);
      if (spec.format == OutputFormat::Csv) {
        write_output(rows_to_csv(rows), spec.out_path);
      } else {
        json arr = json::array();
        for (const ResultRow& row : rows) arr.push_back(row_to_json(row));
        write_output(arr.dump(2) + "\n", spec.out_path);
      }
      return 0;
    }
    case Command::Oracle: {
      OracleConfig cfg;
      cfg.seed = spec.seed;
      const OracleEstimate est =
          estimate_mv(scenario, scenario.population, cfg);
      if (spec.format == OutputFormat::Csv) {
        std::string out = "mv,std_error,draws_used\n";
        out += format_double(est.value);
        out += ',';
        out += format_double(est.std_error);
        out += ',';
        out += std::to_string(est.draws_used);
        out += '\n';
        write_output(out, spec.out_path);
      } else {
        write_output(json{{"mv", est.value},
                          {"std_error", est.std_error},
                          {"draws_used", est.draws_used}}
                             .dump(2) +
                         "\n",
                     spec.out_path);
      }
      return 0;
    }
    case Command::Verify: {
      // scenario assumption report first, then the invariant suite
      const ValidationReport report = validate_scenario(scenario);
      std::string out;
      for (const AssumptionCheck& check : report.checks) {
        switch (check.status) {
          case CheckStatus::Pass: out += "PASS    "; break;
          case CheckStatus::Fail: out += "FAIL    "; break;
          case CheckStatus::AssumedForFamily: out += "ASSUMED "; break;
        }
        out += "assumption/" + check.name + ": " + check.detail + "\n";
      }
      const std::vector<CheckResult> checks = run_verification(spec.seed);
      bool all_ok = true;
      for (const CheckResult& check : checks) {
        all_ok = all_ok && check.passed;
        out += check.passed ? "PASS    " : "FAIL    ";
        out += "claim/" + check.name + ": " + check.detail + "\n";
      }
      write_output(out, spec.out_path);
      return all_ok ? 0 : 4;
    }
  }
  throw StructuralError("unknown command");
}

}  // namespace

int run(const RunSpec& spec) {
  auto diagnose = [](const char* type, const std::exception& e) {
    std::cerr << json{{"error", {{"type", type}, {"message", e.what()}}}}.dump()
              << "\n";
  };
  try {
    return run_checked(spec);
  } catch (const StructuralError& e) {
    diagnose("structural", e);
    return 2;
  } catch (const AccuracyError& e) {
    diagnose("accuracy", e);
    return 3;
  } catch (const IllConditionedError& e) {
    diagnose("ill_conditioned", e);
    return 3;
  } catch (const DomainError& e) {
    diagnose("domain", e);
    return 3;
  } catch (const std::exception& e) {
    diagnose("internal", e);
    return 3;
  }
}

SweepVariable sweep_variable_from_name(const std::string& name) {
  if (name == "N") return SweepVariable::Population;
  if (name == "R") return SweepVariable::Reward;
  if (name == "gamma_scale") return SweepVariable::GammaScale;
  if (name == "observed_m") return SweepVariable::ObservedM;
  throw StructuralError("unknown sweep variable: " + name +
                        " (expected N, R, gamma_scale, or observed_m)");
}

std::vector<double> parse_sweep_values(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string part;
    std::vector<double> parts;
    while (std::getline(in, part, ':')) parts.push_back(std::stod(part));
    if (parts.size() < 2 || parts.size() > 3) {
      throw StructuralError("range syntax is lo:hi or lo:hi:step");
    }
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts.size() == 3 ? parts[2] : 1.0;
    if (!(step > 0.0) || hi < lo) {
      throw StructuralError("range needs hi >= lo and step > 0");
    }
    for (double v = lo; v <= hi + 1e-9 * step; v += step) values.push_back(v);
  } else {
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
      if (!part.empty()) values.push_back(std::stod(part));
    }
  }
  if (values.empty()) throw StructuralError("no sweep values parsed");
  return values;
}

}  // namespace linkage
