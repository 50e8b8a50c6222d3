#include "linkage/welfare.hpp"

#include <algorithm>
#include <cmath>

#include "linkage/errors.hpp"


namespace linkage {

namespace {

double surplus_per_agent(const Scenario& s, double effort) {
  return effort + 2.0 * s.mean_type() - cost_eval(s.cost, effort);
}

struct Candidate {
  double reward = 0.0;
  double entry_prob = 0.0;
  double effort = 0.0;
  double profit = 0.0;
  bool partial = false;
};

// Principal-optimal outcome at reward r for a quality linkage: the better of
// the full-entry equilibrium (when individually rational) and the symmetric
// partial-entry equilibrium (when the indifference effort is attainable).
Candidate quality_candidate_at(const Scenario& s, std::int64_t n, double r,
                               double a_full, double mv_full, double mv_single,
                               double n_dbl) {
  const double mu = s.mean_type();
  Candidate best;
  best.reward = r;
  best.profit = 0.0;
  best.entry_prob = 0.0;

  if (r >= cost_eval(s.cost, a_full) - mu) {
    const double profit = n_dbl * (a_full + mu - r);
    if (profit > best.profit) {
      best = {r, 1.0, a_full, profit, false};
    }
  }
  const double budget = r + mu;
  if (budget > 0.0) {
    const double a_ind = cost_inverse(s.cost, budget);
    const double target = cost_deriv(s.cost, a_ind);
    if (target >= mv_full && target <= mv_single) {
      const double p = entry_probability_for_target(s.with_reward(r), n, target);
      const double profit = p * n_dbl * (a_ind + mu - r);
      if (profit > best.profit) {
        best = {r, p, a_ind, profit, true};
      }
    }
  }
  return best;
}

}  // namespace

WelfareReport welfare(const Scenario& s, const Equilibrium& eq) {
  require_structure(s);
  const double mu = s.mean_type();
  const double a = eq.effort;
  const double cost = cost_eval(s.cost, a);
  const double pn = eq.entry_prob * double(s.population);
  WelfareReport report;
  report.per_agent_surplus = a + 2.0 * mu - cost;
  report.total = pn * report.per_agent_surplus;
  report.consumer = pn * (s.reward + mu - cost);
  report.profit = pn * (a + mu - s.reward);
  report.regime = eq;
  return report;
}

WelfareComparison compare_no_linkage(const Scenario& s, std::int64_t n_max) {
  require_structure(s);
  if (n_max < 2) throw DomainError("comparison needs n_max >= 2");
  const double a1 =
      cost_deriv_inverse(s.cost, single_agent_marginal_value(s));
  WelfareComparison out;
  out.rows.reserve(size_t(n_max - 1));
  for (std::int64_t n = 2; n <= n_max; ++n) {
    const Scenario at_n = s.with_population(n);
    const Equilibrium eq = solve_equilibrium(at_n, n);
    const double linked = welfare(at_n, eq).total;
    const double benchmark = double(n) * surplus_per_agent(s, a1);
    WelfareComparisonRow row;
    row.population = n;
    row.linked = linked;
    row.benchmark = benchmark;
    row.sign = linked > benchmark ? 1 : (linked < benchmark ? -1 : 0);
    if (!out.crossover && row.sign < 0) out.crossover = n;
    out.rows.push_back(row);
  }
  return out;
}

MonopolyOutcome monopoly_optimize(const Scenario& s, std::int64_t n,
                                  const RewardGrid& grid) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  if (!(grid.hi > grid.lo) || grid.steps < 1) {
    throw DomainError("reward grid must be nonempty with hi > lo");
  }
  const Scenario at_n = s.with_population(n);
  const double mu = s.mean_type();
  const double n_dbl = double(n);

  if (s.kind != LinkageKind::Quality) {
    // Full entry at the surplus-extracting reward is exactly optimal: effort
    // rises (or is flat) in participation here, so suppressing entry never
    // pays. The analytic optimum is returned after confirming it against the
    // grid.
    const double a = s.kind == LinkageKind::Circumstance
                         ? effort_full_entry(at_n, n)
                         : cost_deriv_inverse(
                               s.cost, single_agent_marginal_value(s));
    MonopolyOutcome out;
    out.optimal_reward = cost_eval(s.cost, a) - mu;
    out.entry_prob = 1.0;
    out.effort = a;
    out.profit = n_dbl * surplus_per_agent(s, a);
    out.welfare = out.profit;
    out.mode = MonopolyMode::FullEntryInduced;
    if (out.optimal_reward < grid.lo || out.optimal_reward > grid.hi) {
      throw DomainError("reward grid does not contain the optimum");
    }

    const double step = (grid.hi - grid.lo) / double(grid.steps);
    double grid_best = 0.0;
    // Full-entry branch: profit n (a + mu - r) needs r above the optimum, so
    // the branch maximum sits at the first grid point past it.
    const std::int64_t first_cell = std::int64_t(
        std::ceil((out.optimal_reward - grid.lo) / step - 1e-12));
    if (grid.lo + double(first_cell) * step <= grid.hi) {
      grid_best = n_dbl * (a + mu - (grid.lo + double(first_cell) * step));
    }
    if (s.kind == LinkageKind::Circumstance) {
      // Below the optimum the unique equilibrium mixes with falling profit;
      // confirming the first stretch of grid points suffices.
      for (std::int64_t i = 1; i <= 100; ++i) {
        const double r = out.optimal_reward - double(i) * step;
        if (r < grid.lo || r + mu <= 0.0) break;
        const Equilibrium eq = solve_equilibrium(at_n.with_reward(r), n);
        const double profit =
            eq.entry_prob * n_dbl * (eq.effort + mu - r);
        grid_best = std::max(grid_best, profit);
      }
    }
    // profit falls at rate pN per unit of reward, so one grid step of
    // misalignment costs at most n * step
    const double slack = n_dbl * step + 1e-9;
    if (grid_best > out.profit + 1e-9 || out.profit - grid_best > slack) {
      throw AccuracyError("grid search failed to confirm the analytic "
                          "monopoly optimum");
    }
    return out;
  }

  const double a_full = effort_full_entry(at_n, n);
  const double mv_full = marginal_value(at_n, n);
  const double mv_single = single_agent_marginal_value(s);
  const double r_full = cost_eval(s.cost, a_full) - mu;
  const double r_top = cost_eval(
      s.cost, cost_deriv_inverse(s.cost, mv_single)) - mu;

  const double lo = std::max(grid.lo, r_full);
  const double hi = std::min(grid.hi, r_top);
  if (!(hi >= lo)) {
    throw DomainError("reward grid misses the feasible quality range");
  }

  auto candidate = [&](double r) {
    return quality_candidate_at(at_n, n, r, a_full, mv_full, mv_single, n_dbl);
  };

  const double step = (grid.hi - grid.lo) / double(grid.steps);
  Candidate best = candidate(r_full);
  const std::int64_t cells = std::max<std::int64_t>(
      1, std::int64_t(std::ceil((hi - lo) / step)));
  for (std::int64_t i = 0; i <= cells; ++i) {
    const double r = std::min(hi, lo + double(i) * step);
    const Candidate c = candidate(r);
    // ties break toward the smaller reward
    if (c.profit > best.profit + 0.0) best = c;
  }

  // Golden-section refinement of the partial-entry branch around the grid
  // best (profit can be non-smooth at the full/partial boundary, so only the
  // smooth branch is refined).
  {
    double a = std::max(lo, best.reward - step);
    double b = std::min(hi, best.reward + step);
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    Candidate c1 = candidate(x1);
    Candidate c2 = candidate(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
      if (c1.profit < c2.profit) {
        a = x1;
        x1 = x2;
        c1 = c2;
        x2 = a + inv_phi * (b - a);
        c2 = candidate(x2);
      } else {
        b = x2;
        x2 = x1;
        c2 = c1;
        x1 = b - inv_phi * (b - a);
        c1 = candidate(x1);
      }
    }
    const Candidate refined = c1.profit >= c2.profit ? c1 : c2;
    if (refined.profit > best.profit) best = refined;
  }

  if (!(best.profit > 0.0)) {
    throw DomainError("no profitable equilibrium on the reward grid");
  }
  MonopolyOutcome out;
  out.optimal_reward = best.reward;
  out.entry_prob = best.entry_prob;
  out.effort = best.effort;
  out.profit = best.profit;
  out.welfare =
      best.entry_prob * n_dbl * surplus_per_agent(s, best.effort);
  out.mode = best.partial ? MonopolyMode::PartialEntryInduced
                          : MonopolyMode::FullEntryInduced;
  return out;
}

TransferPair transfers(const Scenario& s, std::int64_t n) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  const double a = effort_full_entry(s.with_population(n), n);
  const double mu = s.mean_type();
  return TransferPair{a + mu, cost_eval(s.cost, a) - mu};
}

double data_sharing_cs(const Scenario& s, std::int64_t n) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  const double a = effort_full_entry(s.with_population(n), n);
  return double(n) * surplus_per_agent(s, a);
}

double proprietary_cs_bound(const Scenario& s, std::int64_t n,
                            const std::vector<std::int64_t>& partition) {
  require_structure(s);
  if (partition.empty()) throw DomainError("partition must be nonempty");
  std::int64_t total = 0;
  for (std::int64_t size : partition) {
    if (size < 1) throw DomainError("every firm must serve at least 1 agent");
    total += size;
  }
  if (total > n) throw DomainError("partition exceeds the population");
  if (s.kind == LinkageKind::Quality && partition.size() > 1) {
    throw DomainError(
        "quality linkages concentrate all agents at one firm in equilibrium; "
        "multi-firm quality partitions are not admissible");
  }
  double bound = 0.0;
  for (std::int64_t size : partition) {
    const double a = effort_full_entry(s.with_population(size), size);
    bound += double(size) * surplus_per_agent(s, a);
  }
  return bound;
}

double uncertainty_expected_mv(const std::vector<UncertainSegment>& segments,
                               double p) {
  if (segments.empty()) throw DomainError("need at least one segment");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("entry probability must lie in [0, 1]");
  }
  double weight_total = 0.0;
  for (const UncertainSegment& seg : segments) {
    if (!(seg.prob >= 0.0)) throw DomainError("segment weights must be >= 0");
    weight_total += seg.prob;
    if (seg.size_dist.empty()) {
      throw DomainError("each segment needs a population distribution");
    }
    double size_total = 0.0;
    for (const PopulationWeight& w : seg.size_dist) {
      if (w.size < 1) throw DomainError("population sizes must be >= 1");
      if (!(w.prob >= 0.0)) throw DomainError("size weights must be >= 0");
      size_total += w.prob;
    }
    if (std::fabs(size_total - 1.0) > 1e-9) {
      throw DomainError("size distribution must sum to 1");
    }
  }
  if (std::fabs(weight_total - 1.0) > 1e-9) {
    throw DomainError("segment weights must sum to 1");
  }
  double acc = 0.0;
  for (const UncertainSegment& seg : segments) {
    for (const PopulationWeight& w : seg.size_dist) {
      acc += seg.prob * w.prob * mv_mixed(seg.scenario, w.size, p);
    }
  }
  return acc;
}

}  // namespace linkage
