#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace linkage {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the full numerical verification suite: every structural claim the
/// model makes (marginal-value monotonicity and limits, agreement of the
/// closed forms with the projection engine and the simulation oracle, entry
/// threshold structure, welfare orderings, data-sharing dominance, multilink
/// and non-Gaussian properties), each evaluated at its pinned tolerance.
/// Deterministic for a fixed seed.
std::vector<CheckResult> run_verification(std::uint64_t seed);

}  // namespace linkage
