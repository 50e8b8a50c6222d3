#pragma once

#include <cstdint>
#include <optional>

#include "linkage/mv.hpp"
#include "linkage/scenario.hpp"

namespace linkage {

enum class Regime { FullEntry, MixedEntry, Benchmark };

/// Largest population sustaining full entry under a circumstance linkage.
struct NStarResult {
  bool is_infinite = false;
  std::int64_t value = 0;  // meaningful when finite; 0 means no full entry
};

struct Equilibrium {
  Regime regime = Regime::FullEntry;
  double entry_prob = 1.0;
  double effort = 0.0;
  std::optional<NStarResult> n_star;       // circumstance scenarios
  std::optional<double> a_double_star;     // mixed entry only
};

struct FirstBest {
  double effort = 0.0;  // C'(effort) = 1
};

/// Full-entry equilibrium effort C'^{-1}(MV(N)).
double effort_full_entry(const Scenario& s, std::int64_t n);

/// Expected marginal value when each of the other N-1 agents enters
/// independently with probability p: the exact binomial mixture of MV(1+k).
double mv_mixed(const Scenario& s, std::int64_t n, double p);

/// Entry probability p with mv_mixed(s, n, p) = target, by bisection; the
/// mixture is monotone in p for both linkage kinds (opposite directions).
/// Clamps to {0, 1} when the target is outside the attainable range.
double entry_probability_for_target(const Scenario& s, std::int64_t n,
                                    double target);

/// Threshold population for circumstance scenarios: the largest N with
/// MV_C(N) <= C'(a**), a** = C^{-1}(R + mu). Infinite when the limiting
/// marginal value never reaches that bound; 0 when even a single agent's
/// marginal value exceeds it.
NStarResult solve_n_star(const Scenario& s);

/// The unique symmetric equilibrium at population N.
Equilibrium solve_equilibrium(const Scenario& s, std::int64_t n);

/// The no-linkage benchmark at population N: full entry at effort a*(1).
Equilibrium benchmark_equilibrium(const Scenario& s);

/// The entry probability that would equate MV(1 + p(N-1)) with C'(a**) if
/// entry were deterministic rather than binomial; reported for comparison
/// with the mixed-entry probability, asserting nothing about their order.
double deterministic_entry_probability(const Scenario& s, std::int64_t n);

FirstBest first_best(const Scenario& s);

}  // namespace linkage
