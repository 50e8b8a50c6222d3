#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace linkage {

enum class Command { Solve, Sweep, Verify, Oracle };
enum class OutputFormat { Csv, Json };
enum class SweepVariable { Population, Reward, GammaScale, ObservedM };

struct SweepSpec {
  SweepVariable variable = SweepVariable::Population;
  std::vector<double> values;
};

struct RunSpec {
  Command command = Command::Solve;
  std::string scenario_path;
  std::optional<SweepSpec> sweep;  // present iff command == Sweep
  std::uint64_t seed = 0;
  std::string out_path;  // empty writes to stdout
  OutputFormat format = OutputFormat::Csv;
};

/// Executes a run and returns the process exit code:
///   0 success, 2 validation failure, 3 solver/accuracy error,
///   4 verification-suite failure.
/// Failures also emit a JSON diagnostic on standard error. Output files are
/// only written after the whole computation succeeds.
int run(const RunSpec& spec);

SweepVariable sweep_variable_from_name(const std::string& name);

/// Parses "lo:hi", "lo:hi:step", or a comma-separated list.
std::vector<double> parse_sweep_values(const std::string& text);

}  // namespace linkage
