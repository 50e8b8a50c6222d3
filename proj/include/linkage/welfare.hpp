#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "linkage/equilibrium.hpp"
#include "linkage/scenario.hpp"

namespace linkage {

/// Surplus accounting for a solved equilibrium:
///   W  = pN (a + 2 mu - C(a))         total welfare
///   CS = pN (R + mu - C(a))           consumer side
///   Pi = pN (a + mu - R)              principal side
/// with W = CS + Pi by construction.
struct WelfareReport {
  double total = 0.0;
  double consumer = 0.0;
  double profit = 0.0;
  double per_agent_surplus = 0.0;  // a + 2 mu - C(a)
  Equilibrium regime;
};

WelfareReport welfare(const Scenario& s, const Equilibrium& eq);

struct WelfareComparisonRow {
  std::int64_t population = 0;
  double linked = 0.0;
  double benchmark = 0.0;
  int sign = 0;  // sign of linked - benchmark
};

struct WelfareComparison {
  std::vector<WelfareComparisonRow> rows;  // populations 2..n_max
  // Smallest population where the linked welfare falls below the benchmark;
  // empty when none is found up to n_max.
  std::optional<std::int64_t> crossover;
};

/// Linked-equilibrium welfare against the own-outcome benchmark for
/// populations 2..n_max.
WelfareComparison compare_no_linkage(const Scenario& s, std::int64_t n_max);

struct RewardGrid {
  double lo = -2.0;
  double hi = 2.0;
  std::int64_t steps = 4000;  // grid intervals
};

enum class MonopolyMode { FullEntryInduced, PartialEntryInduced };

struct MonopolyOutcome {
  double optimal_reward = 0.0;
  double entry_prob = 1.0;
  double effort = 0.0;
  double profit = 0.0;
  double welfare = 0.0;
  MonopolyMode mode = MonopolyMode::FullEntryInduced;
};

/// Profit-maximizing reward for a principal who keeps every agent at their
/// outside option. Circumstance and benchmark scenarios have the analytic
/// optimum R = C(a*(N)) - mu with full entry; quality scenarios compare that
/// full-entry candidate against the partial-entry equilibria available at
/// rewards in (C(a*_Q(N)) - mu, C(a*(1)) - mu], by grid search plus
/// golden-section refinement.
MonopolyOutcome monopoly_optimize(const Scenario& s, std::int64_t n,
                                  const RewardGrid& grid = {});

/// Zero-profit and zero-consumer-surplus rewards at population n.
struct TransferPair {
  double competitive = 0.0;  // a*(n) + mu
  double monopolist = 0.0;   // C(a*(n)) - mu
};

TransferPair transfers(const Scenario& s, std::int64_t n);

/// Consumer welfare when all firms see all outcomes and compete:
/// N (2 mu + a*(N) - C(a*(N))).
double data_sharing_cs(const Scenario& s, std::int64_t n);

/// Upper bound on proprietary-data consumer welfare for a given allocation of
/// agents to firms (each firm retains only its own customers' outcomes):
/// every firm priced at its competitive transfer. Quality linkages
/// concentrate all agents at one firm in equilibrium, so multi-firm quality
/// partitions are rejected.
double proprietary_cs_bound(const Scenario& s, std::int64_t n,
                            const std::vector<std::int64_t>& partition);

struct PopulationWeight {
  std::int64_t size = 1;
  double prob = 1.0;
};

struct UncertainSegment {
  Scenario scenario;
  double prob = 1.0;
  std::vector<PopulationWeight> size_dist;
};

/// Expected marginal value over segment identity, population size, and a
/// binomial number of co-entrants at entry rate p.
double uncertainty_expected_mv(const std::vector<UncertainSegment>& segments,
                               double p);

}  // namespace linkage
