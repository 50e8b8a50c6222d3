#include "linkage/verify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "linkage/equilibrium.hpp"
#include "linkage/gaussian_engine.hpp"
#include "linkage/mv_oracle.hpp"
#include "linkage/number_format.hpp"
#include "linkage/posterior_general.hpp"
#include "linkage/rng.hpp"
#include "linkage/welfare.hpp"

namespace linkage {

namespace {

Scenario quality_canonical(double reward = 0.0) {
  Scenario s;
  s.kind = LinkageKind::Quality;
  s.gaussian = GaussianParams{1.0, 1.0, 1.0, 0.0, 1.0};
  s.cost = CostFunction::quadratic(1.0);
  s.reward = reward;
  s.population = 2;
  return s;
}

Scenario circumstance_canonical(double reward = -0.76) {
  Scenario s;
  s.kind = LinkageKind::Circumstance;
  s.gaussian = GaussianParams{1.0, 0.0, 2.0, 0.5, 0.5};
  s.cost = CostFunction::quadratic(1.0);
  s.reward = reward;
  s.population = 2;
  return s;
}

Scenario no_linkage_canonical(double reward = 0.0) {
  Scenario s = quality_canonical(reward);
  s.kind = LinkageKind::NoLinkage;
  return s;
}

Scenario logistic_scenario(LinkageKind kind) {
  GeneralParams g;
  g.common_type = ComponentDist::logistic_with_variance(1.0, 1.0);
  g.idio_type = ComponentDist::logistic_with_variance(0.0, 1.0);
  g.common_shock = ComponentDist::logistic_with_variance(0.0, 0.5);
  g.idio_shock = ComponentDist::logistic_with_variance(0.0, 0.5);
  Scenario s;
  s.kind = kind;
  s.general = g;
  s.cost = CostFunction::quadratic(1.0);
  s.reward = 0.0;
  s.population = 2;
  return s;
}

double log_uniform(CounterStream& stream, double lo, double hi) {
  return lo * std::exp(stream.next_uniform() * std::log(hi / lo));
}

struct GaussianDraw {
  GaussianParams params;
  Scenario quality;
  Scenario circumstance;
};

GaussianDraw draw_pair(CounterStream& stream) {
  GaussianDraw d;
  d.params.var_common_type = log_uniform(stream, 0.1, 10.0);
  d.params.var_idio_type = log_uniform(stream, 0.1, 10.0);
  d.params.var_common_shock = log_uniform(stream, 0.1, 10.0);
  d.params.var_idio_shock = log_uniform(stream, 0.1, 10.0);
  d.params.mu = 5.0 * stream.next_uniform();
  d.quality = quality_canonical();
  d.quality.gaussian = d.params;
  d.circumstance = circumstance_canonical();
  d.circumstance.gaussian = d.params;
  d.circumstance.reward = 0.0;
  return d;
}

struct Tally {
  bool ok = true;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

CheckResult mv_closed_vs_projection(std::uint64_t seed) {
  CounterStream stream(seed, 101);
  double worst = 0.0;
  for (int draw = 0; draw < 200; ++draw) {
    const GaussianDraw d = draw_pair(stream);
    for (std::int64_t n = 1; n <= 50; ++n) {
      const double dq =
          std::fabs(mv_closed_quality(d.params, double(n)) -
                    mv_projection(single_linkage_problem(d.quality, n), 0));
      const double dc = std::fabs(
          mv_closed_circumstance(d.params, double(n)) -
          mv_projection(single_linkage_problem(d.circumstance, n), 0));
      worst = std::max({worst, dq, dc});
    }
  }
  return {"mv-closed-vs-projection", worst <= 1e-10,
          "max |closed - projection| = " + format_double(worst) +
              " over 200 draws, N = 1..50, both kinds (tol 1e-10)"};
}

CheckResult mv_closed_vs_simulation(std::uint64_t seed) {
  OracleConfig cfg;
  cfg.draws = 1'000'000;
  cfg.seed = seed;
  Tally tally;
  double worst_gap = 0.0;
  for (int kind = 0; kind < 2; ++kind) {
    const Scenario s =
        kind == 0 ? quality_canonical() : circumstance_canonical();
    for (std::int64_t n : {1, 2, 3, 10}) {
      const double closed =
          kind == 0 ? mv_closed_quality(*s.gaussian, double(n))
                    : mv_closed_circumstance(*s.gaussian, double(n));
      const OracleEstimate est = estimate_mv(s, n, cfg);
      // three standard errors plus a floor: common draws are exact for
      // linear posteriors, leaving only rounding noise
      const double tol = 3.0 * est.std_error + 1e-12;
      const double gap = std::fabs(est.value - closed);
      worst_gap = std::max(worst_gap, gap);
      if (gap > tol) {
        tally.fail("kind " + std::to_string(kind) + " N " + std::to_string(n) +
                   ": |" + format_double(est.value) + " - " +
                   format_double(closed) + "| > " + format_double(tol));
      }
    }
  }
  if (tally.ok) {
    tally.detail = "8 populations within 3 SE + 1e-12 of the closed forms "
                   "(worst gap " +
                   format_double(worst_gap) + ")";
  }
  return {"mv-closed-vs-simulation", tally.ok, tally.detail};
}

CheckResult mv_monotonicity_and_limits(std::uint64_t seed) {
  CounterStream stream(seed, 103);
  Tally tally;
  for (int draw = 0; draw < 200; ++draw) {
    const GaussianDraw d = draw_pair(stream);
    const double lim_q = mv_quality_limit(d.params);
    const double lim_c = mv_circumstance_limit(d.params);
    double prev_q = mv_closed_quality(d.params, 1.0);
    double prev_c = mv_closed_circumstance(d.params, 1.0);
    double prev_aq = cost_deriv_inverse(d.quality.cost, prev_q);
    double prev_ac = prev_aq;
    for (std::int64_t n = 2; n <= 50; ++n) {
      const double q = mv_closed_quality(d.params, double(n));
      const double c = mv_closed_circumstance(d.params, double(n));
      if (!(prev_q - q > 1e-12) || !(c - prev_c > 1e-12)) {
        tally.fail("monotonicity margin violated at draw " +
                   std::to_string(draw) + ", N = " + std::to_string(n));
      }
      const double aq = cost_deriv_inverse(d.quality.cost, q);
      const double ac = cost_deriv_inverse(d.circumstance.cost, c);
      if (!(aq < prev_aq) || !(ac > prev_ac)) {
        tally.fail("effort monotonicity violated at draw " +
                   std::to_string(draw));
      }
      prev_q = q;
      prev_c = c;
      prev_aq = aq;
      prev_ac = ac;
    }
    const double tail_q = mv_closed_quality(d.params, 1e4);
    const double tail_c = mv_closed_circumstance(d.params, 1e4);
    if (std::fabs(tail_q - lim_q) > 1e-3 || std::fabs(tail_c - lim_c) > 1e-3) {
      tally.fail("limit gap at N = 10^4 exceeds 1e-3 at draw " +
                 std::to_string(draw));
    }
  }
  if (tally.ok) {
    tally.detail = "strict monotonicity (margin 1e-12) and closed-form limits "
                   "(gap <= 1e-3 at N = 10^4) over 200 draws";
  }
  return {"mv-monotonicity-and-limits", tally.ok, tally.detail};
}

CheckResult entry_threshold_and_mixing(std::uint64_t) {
  const Scenario base = circumstance_canonical(-0.76);
  Tally tally;
  const NStarResult n_star = solve_n_star(base);
  if (n_star.is_infinite || n_star.value != 2) {
    tally.fail("expected full-entry threshold 2, got " +
               (n_star.is_infinite ? std::string("infinite")
                                   : std::to_string(n_star.value)));
  }
  const double a_ref = std::sqrt(0.48);
  double prev_p = 1.0;
  double last_p = 1.0;
  for (std::int64_t n = 3; n <= 200; ++n) {
    const Scenario s = base.with_population(n);
    const Equilibrium eq = solve_equilibrium(s, n);
    if (eq.regime != Regime::MixedEntry) {
      tally.fail("expected mixed entry at N = " + std::to_string(n));
      break;
    }
    if (std::fabs(eq.effort - a_ref) > 1e-10) {
      tally.fail("indifference effort drifted at N = " + std::to_string(n));
    }
    const double residual = std::fabs(mv_mixed(s, n, eq.entry_prob) -
                                      cost_deriv(s.cost, eq.effort));
    if (residual > 1e-10) {
      tally.fail("indifference residual " + format_double(residual) +
                 " at N = " + std::to_string(n));
    }
    if (!(eq.entry_prob < prev_p)) {
      tally.fail("entry probability not strictly decreasing at N = " +
                 std::to_string(n));
    }
    prev_p = eq.entry_prob;
    last_p = eq.entry_prob;
  }
  if (last_p >= 0.05) {
    tally.fail("entry probability at N = 200 is " + format_double(last_p) +
               " (expected < 0.05)");
  }
  if (tally.ok) {
    tally.detail = "threshold 2; constant indifference effort, residuals <= "
                   "1e-10, p strictly decreasing to " +
                   format_double(last_p) + " at N = 200";
  }
  return {"entry-threshold-and-mixing", tally.ok, tally.detail};
}

CheckResult welfare_signs_vs_benchmark(std::uint64_t) {
  Tally tally;
  const WelfareComparison q = compare_no_linkage(quality_canonical(0.0), 60);
  for (const WelfareComparisonRow& row : q.rows) {
    if (row.sign != -1) {
      tally.fail("quality welfare not below the benchmark at N = " +
                 std::to_string(row.population));
    }
  }
  const WelfareComparison c =
      compare_no_linkage(circumstance_canonical(-0.76), 200);
  int sign_changes = 0;
  for (size_t i = 1; i < c.rows.size(); ++i) {
    if (c.rows[i].sign != c.rows[i - 1].sign) ++sign_changes;
  }
  if (c.rows.front().sign != 1 || sign_changes != 1) {
    tally.fail(
        "circumstance comparison should change sign exactly once, saw " +
        std::to_string(sign_changes));
  }
  if (tally.ok) {
    tally.detail =
        "quality below benchmark for N = 2..60; circumstance above-then-below "
        "with one sign change at N = " +
        std::to_string(c.crossover.value_or(-1));
  }
  return {"welfare-signs-vs-benchmark", tally.ok, tally.detail};
}

CheckResult effort_below_first_best(std::uint64_t seed) {
  CounterStream stream(seed, 106);
  Tally tally;
  double narrowest = 1e300;
  auto check_scenario = [&](const Scenario& s, std::int64_t n) {
    const Scenario at_n = s.with_population(n);
    const Equilibrium eq = solve_equilibrium(at_n, n);
    const double margin = first_best(at_n).effort - eq.effort;
    narrowest = std::min(narrowest, margin);
    if (!(margin > 1e-9)) {
      tally.fail("first-best margin " + format_double(margin) +
                 " too small at N = " + std::to_string(n));
    }
  };
  for (int draw = 0; draw < 60; ++draw) {
    const GaussianDraw d = draw_pair(stream);
    for (std::int64_t n : {1, 2, 7, 25}) {
      check_scenario(d.quality, n);
      check_scenario(d.circumstance, n);
    }
  }
  for (std::int64_t n = 2; n <= 60; ++n) {
    check_scenario(quality_canonical(0.0), n);
    check_scenario(circumstance_canonical(-0.76), n);
    check_scenario(no_linkage_canonical(0.0), n);
  }
  if (tally.ok) {
    tally.detail = "every solved effort below first best (narrowest margin " +
                   format_double(narrowest) + ")";
  }
  return {"effort-below-first-best", tally.ok, tally.detail};
}

CheckResult monopoly_welfare_ordering(std::uint64_t) {
  RewardGrid grid;
  grid.lo = -1.0;
  grid.hi = 0.5;
  grid.steps = 15000;  // step width 1e-4
  const double grid_step = (grid.hi - grid.lo) / double(grid.steps);
  Tally tally;
  for (std::int64_t n = 2; n <= 20; ++n) {
    const MonopolyOutcome q = monopoly_optimize(quality_canonical(0.0), n, grid);
    const MonopolyOutcome ndl =
        monopoly_optimize(no_linkage_canonical(0.0), n, grid);
    const MonopolyOutcome c =
        monopoly_optimize(circumstance_canonical(-0.76), n, grid);
    if (!(q.welfare < ndl.welfare - 1e-6) ||
        !(ndl.welfare < c.welfare - 1e-6)) {
      tally.fail("ordering violated at N = " + std::to_string(n) + ": " +
                 format_double(q.welfare) + " / " +
                 format_double(ndl.welfare) + " / " + format_double(c.welfare));
    }
    const CostFunction cost = CostFunction::quadratic(1.0);
    for (const MonopolyOutcome* out : {&q, &ndl, &c}) {
      const double cs =
          out->entry_prob * double(n) *
          (out->optimal_reward + 1.0 - cost_eval(cost, out->effort));
      const double slack =
          cost_deriv(cost, out->effort) * grid_step * double(n) + 1e-9;
      if (std::fabs(cs) > slack) {
        tally.fail("monopoly consumer surplus " + format_double(cs) +
                   " above grid slack at N = " + std::to_string(n));
      }
    }
  }
  if (tally.ok) {
    tally.detail = "monopoly welfare ordered quality < benchmark < "
                   "circumstance for N = 2..20; consumer surplus zero within "
                   "grid slack";
  }
  return {"monopoly-welfare-ordering", tally.ok, tally.detail};
}

CheckResult data_sharing_consumer_welfare(std::uint64_t seed) {
  CounterStream stream(seed, 108);
  Tally tally;
  for (int kind = 0; kind < 2; ++kind) {
    const Scenario base =
        kind == 0 ? quality_canonical(0.0) : circumstance_canonical(-0.76);
    for (int draw = 0; draw < 100; ++draw) {
      const std::int64_t n = 4 + std::int64_t(stream.next_uniform() * 17.0);
      std::vector<std::int64_t> partition;
      if (kind == 0) {
        // quality: equilibrium concentrates everyone at one firm
        partition.push_back(1 +
                            std::int64_t(stream.next_uniform() * double(n)));
      } else {
        std::int64_t left = n;
        while (left > 0) {
          const std::int64_t size =
              1 + std::int64_t(stream.next_uniform() * double(left));
          partition.push_back(size);
          left -= size;
        }
      }
      const double sharing = data_sharing_cs(base, n);
      const double bound = proprietary_cs_bound(base, n, partition);
      if (!(sharing >= bound - 1e-9)) {
        tally.fail("sharing consumer welfare " + format_double(sharing) +
                   " below the proprietary bound " + format_double(bound));
      }
    }
  }
  if (tally.ok) {
    tally.detail = "sharing consumer welfare dominates the proprietary bound "
                   "on 100 random partitions per kind, N = 4..20";
  }
  return {"data-sharing-consumer-welfare", tally.ok, tally.detail};
}

CheckResult multilink_monotonicity(std::uint64_t seed) {
  CounterStream stream(seed, 109);
  Tally tally;

  MultiLinkSpec example;
  example.segments = {SegmentSpec{0.5, 1, 1.0, 1.0},
                      SegmentSpec{0.5, 1, 1.0, 1.0}};
  example.agent0_var_idio_type = 1.0;
  example.agent0_var_idio_shock = 1.0;
  const double expected[3] = {2.0 / 3.0, 4.75 / 7.25, 1.8 / 2.8};
  for (std::int64_t m = 0; m <= 2; ++m) {
    example.observed_m = m;
    const double beta = mv_multilink(example, LinkageKind::Quality);
    if (std::fabs(beta - expected[m]) > 1e-9) {
      tally.fail("worked example coefficient off at m = " + std::to_string(m) +
                 ": " + format_double(beta));
    }
  }

  for (int kind = 0; kind < 2; ++kind) {
    const LinkageKind lk =
        kind == 0 ? LinkageKind::Quality : LinkageKind::Circumstance;
    for (int draw = 0; draw < 50; ++draw) {
      MultiLinkSpec spec;
      const int j = 1 + int(stream.next_uniform() * 5.0);
      for (int k = 0; k < j; ++k) {
        spec.segments.push_back(SegmentSpec{
            log_uniform(stream, 0.1, 10.0),
            1 + std::int64_t(stream.next_uniform() * 4.0),
            log_uniform(stream, 0.1, 10.0), log_uniform(stream, 0.1, 10.0)});
      }
      spec.agent0_var_idio_type = log_uniform(stream, 0.1, 10.0);
      spec.agent0_var_idio_shock = log_uniform(stream, 0.1, 10.0);
      double prev = kind == 0 ? 2.0 : -1.0;
      for (std::int64_t m = 0; m <= j; ++m) {
        spec.observed_m = m;
        const double beta = mv_multilink(spec, lk);
        const bool ok = kind == 0 ? beta < prev - 1e-12 : beta > prev + 1e-12;
        if (m > 0 && !ok) {
          tally.fail("multilink monotonicity violated at draw " +
                     std::to_string(draw));
        }
        prev = beta;
      }
    }
  }
  if (tally.ok) {
    tally.detail = "worked two-segment coefficients within 1e-9; strict "
                   "monotonicity in observed links on 50 random specs per kind";
  }
  return {"multilink-monotonicity", tally.ok, tally.detail};
}

CheckResult non_gaussian_structure(std::uint64_t seed) {
  CounterStream stream(seed, 110);
  Tally tally;
  const QuadratureConfig cfg;

  for (int kind = 0; kind < 2; ++kind) {
    const Scenario s = logistic_scenario(
        kind == 0 ? LinkageKind::Quality : LinkageKind::Circumstance);
    const PosteriorModel model(s, cfg);
    const double step = 1e-4 * std::sqrt(3.0);  // outcome sd = sqrt(2 + 1)
    for (int draw = 0; draw < 100; ++draw) {
      const std::int64_t n = 2 + std::int64_t(stream.next_uniform() * 3.0);
      OutcomeProfile profile;
      for (std::int64_t j = 0; j < n; ++j) {
        profile.values.push_back(1.0 + 1.8 * stream.next_normal());
        profile.conjectured_actions.push_back(0.0);
      }
      const double own = forecast_sensitivity(model, profile, 0, 0, step);
      if (!(own > -1e-6 && own < 1.0 + 1e-6)) {
        tally.fail("own sensitivity " + format_double(own) + " out of (0,1)");
      }
      const double cross = forecast_sensitivity(model, profile, 0, 1, step);
      if (kind == 0 ? !(cross > -1e-6) : !(cross < 1e-6)) {
        tally.fail("cross sensitivity sign violated: " + format_double(cross));
      }
    }
  }

  OracleConfig ocfg;
  ocfg.draws = 150'000;
  ocfg.seed = seed;
  for (int kind = 0; kind < 2; ++kind) {
    const Scenario s = logistic_scenario(
        kind == 0 ? LinkageKind::Quality : LinkageKind::Circumstance);
    double prev = kind == 0 ? 2.0 : 0.0;
    for (std::int64_t n : {1, 2, 3}) {
      const double quad = mv_quadrature(s, n, cfg);
      const bool ordered = kind == 0 ? quad < prev : quad > prev;
      if (!ordered) {
        tally.fail("quadrature marginal value ordering violated at N = " +
                   std::to_string(n));
      }
      const OracleEstimate mc = estimate_mv(s, n, ocfg);
      if (std::fabs(mc.value - quad) > 3.0 * mc.std_error + 1e-12) {
        tally.fail("quadrature/simulation gap " +
                   format_double(std::fabs(mc.value - quad)) + " at N = " +
                   std::to_string(n) + " exceeds 3 SE = " +
                   format_double(3.0 * mc.std_error));
      }
      prev = quad;
    }
  }
  if (tally.ok) {
    tally.detail = "sensitivities in (0,1) with the sign dichotomy at 100 "
                   "profiles per kind; marginal values strictly ordered and "
                   "within 3 SE of simulation";
  }
  return {"non-gaussian-structure", tally.ok, tally.detail};
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
  std::vector<CheckResult> results;
  results.push_back(mv_closed_vs_projection(seed));
  results.push_back(mv_closed_vs_simulation(seed));
  results.push_back(mv_monotonicity_and_limits(seed));
  results.push_back(entry_threshold_and_mixing(seed));
  results.push_back(welfare_signs_vs_benchmark(seed));
  results.push_back(effort_below_first_best(seed));
  results.push_back(monopoly_welfare_ordering(seed));
  results.push_back(data_sharing_consumer_welfare(seed));
  results.push_back(multilink_monotonicity(seed));
  results.push_back(non_gaussian_structure(seed));
  return results;
}

}  // namespace linkage
