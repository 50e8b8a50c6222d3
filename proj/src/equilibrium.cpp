#include "linkage/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "linkage/errors.hpp"
#include "linkage/gaussian_engine.hpp"
#include "linkage/posterior_general.hpp"

namespace linkage {

namespace {

constexpr std::int64_t kSearchCap = std::int64_t(1) << 30;

// Non-Gaussian equilibrium work is restricted to quadratic cost with
// kappa >= 1 (the configurations whose convexity is known to dominate the
// posterior curvature for the supported families).
void gate_general(const Scenario& s) {
  if (s.is_gaussian()) return;
  if (s.cost.family != CostFamily::Quadratic || s.cost.kappa < 1.0) {
    throw DomainError(
        "non-Gaussian equilibrium solving requires quadratic cost with "
        "kappa >= 1");
  }
}

std::vector<double> mv_profile(const Scenario& s, std::int64_t n) {
  std::vector<double> mv(static_cast<size_t>(n));
  for (std::int64_t k = 1; k <= n; ++k) {
    mv[size_t(k - 1)] = marginal_value(s, k);
  }
  return mv;
}

double mv_mixed_from(const std::vector<double>& mv, double p) {
  const std::int64_t n = std::int64_t(mv.size());
  if (p <= 0.0) return mv.front();
  if (p >= 1.0) return mv.back();
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  double acc = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double log_pmf = std::lgamma(double(n)) -
                           std::lgamma(double(k + 1)) -
                           std::lgamma(double(n - k)) + double(k) * lp +
                           double(n - 1 - k) * lq;
    acc += std::exp(log_pmf) * mv[size_t(k)];
  }
  return acc;
}

// Bisection for the p equating a monotone mixed marginal value with target.
double bisect_entry_probability(const std::vector<double>& mv, double target,
                                double tol) {
  const bool increasing = mv.back() >= mv.front();
  auto f = [&](double p) { return mv_mixed_from(mv, p) - target; };
  double lo = 0.0, hi = 1.0;
  double f_lo = f(lo), f_hi = f(hi);
  if (!increasing) {
    std::swap(lo, hi);
    std::swap(f_lo, f_hi);
  }
  if (f_lo > 0.0) return increasing ? 0.0 : 1.0;
  if (f_hi < 0.0) return increasing ? 1.0 : 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::fabs(fm) <= tol && std::fabs(hi - lo) <= 1e-12) return mid;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double solver_tol(const Scenario& s) { return s.is_gaussian() ? 1e-10 : 1e-6; }

double a_double_star_of(const Scenario& s) {
  const double budget = s.reward + s.mean_type();
  if (!(budget > 0.0)) {
    throw DomainError(
        "reward + mu must be positive for entry to be individually rational "
        "at any effort");
  }
  return cost_inverse(s.cost, budget);
}

}  // namespace

double effort_full_entry(const Scenario& s, std::int64_t n) {
  gate_general(s);
  return cost_deriv_inverse(s.cost, marginal_value(s, n));
}

double mv_mixed(const Scenario& s, std::int64_t n, double p) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("entry probability must lie in [0, 1]");
  }
  return mv_mixed_from(mv_profile(s, n), p);
}

double entry_probability_for_target(const Scenario& s, std::int64_t n,
                                    double target) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  return bisect_entry_probability(mv_profile(s, n), target, solver_tol(s));
}

NStarResult solve_n_star(const Scenario& s) {
  require_structure(s);
  gate_general(s);
  if (s.kind != LinkageKind::Circumstance) {
    throw DomainError("the full-entry threshold is a circumstance-linkage "
                      "object");
  }
  const double target = cost_deriv(s.cost, a_double_star_of(s));

  if (s.is_gaussian()) {
    // The limit comparison decides the infinite case outright.
    if (target >= mv_circumstance_limit(*s.gaussian)) {
      return NStarResult{true, 0};
    }
    if (target < marginal_value(s, 1)) {
      return NStarResult{false, 0};
    }
    std::int64_t hi = 1;
    while (hi < kSearchCap && marginal_value(s, 2 * hi) <= target) {
      hi *= 2;
    }
    if (hi >= kSearchCap) return NStarResult{true, 0};
    // Largest N in (hi, 2hi] with MV_C(N) <= target, by binary search.
    std::int64_t lo = hi;  // MV(lo) <= target
    hi = 2 * hi;           // MV(hi) > target
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (marginal_value(s, mid) <= target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return NStarResult{false, lo};
  }

  // General parameterization: marginal values are only available to N = 12.
  if (target < marginal_value(s, 1)) return NStarResult{false, 0};
  for (std::int64_t n = 2; n <= 12; ++n) {
    if (marginal_value(s, n) > target) return NStarResult{false, n - 1};
  }
  throw DomainError(
      "full-entry threshold exceeds the N = 12 cap for general scenarios");
}

Equilibrium solve_equilibrium(const Scenario& s, std::int64_t n) {
  require_structure(s);
  gate_general(s);
  if (n < 1) throw DomainError("population must be at least 1");

  Equilibrium eq;
  switch (s.kind) {
    case LinkageKind::NoLinkage:
      eq.regime = Regime::Benchmark;
      eq.entry_prob = 1.0;
      eq.effort = cost_deriv_inverse(s.cost, single_agent_marginal_value(s));
      return eq;
    case LinkageKind::Quality:
      eq.regime = Regime::FullEntry;
      eq.entry_prob = 1.0;
      eq.effort = effort_full_entry(s, n);
      return eq;
    case LinkageKind::Circumstance:
      break;
  }

  const NStarResult n_star = solve_n_star(s);
  eq.n_star = n_star;
  if (n_star.is_infinite || n <= n_star.value) {
    eq.regime = Regime::FullEntry;
    eq.entry_prob = 1.0;
    eq.effort = effort_full_entry(s, n);
    return eq;
  }

  const double a_star_star = a_double_star_of(s);
  const double target = cost_deriv(s.cost, a_star_star);
  const double p =
      bisect_entry_probability(mv_profile(s, n), target, solver_tol(s));
  eq.regime = Regime::MixedEntry;
  eq.entry_prob = p;
  eq.effort = a_star_star;
  eq.a_double_star = a_star_star;
  return eq;
}

Equilibrium benchmark_equilibrium(const Scenario& s) {
  Equilibrium eq;
  eq.regime = Regime::Benchmark;
  eq.entry_prob = 1.0;
  eq.effort = cost_deriv_inverse(s.cost, single_agent_marginal_value(s));
  return eq;
}

double deterministic_entry_probability(const Scenario& s, std::int64_t n) {
  require_structure(s);
  gate_general(s);
  if (s.kind != LinkageKind::Circumstance) {
    throw DomainError(
        "deterministic entry comparison applies to mixed-entry equilibria, "
        "which only arise under a circumstance linkage");
  }
  const NStarResult n_star = solve_n_star(s);
  if (n_star.is_infinite || n < n_star.value) {
    throw DomainError("population is inside the full-entry region");
  }
  const double target = cost_deriv(s.cost, a_double_star_of(s));

  auto mv_real = [&](double n_real) {
    if (s.is_gaussian()) return mv_closed_circumstance(*s.gaussian, n_real);
    // Linear interpolation between integer populations (documented
    // approximation for general scenarios).
    const double fl = std::floor(n_real);
    const std::int64_t k = std::int64_t(fl);
    if (double(k) == n_real) return marginal_value(s, k);
    const double lo = marginal_value(s, k);
    const double hi = marginal_value(s, k + 1);
    return lo + (hi - lo) * (n_real - fl);
  };

  if (mv_real(double(n)) <= target) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mv_real(1.0 + mid * double(n - 1)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

FirstBest first_best(const Scenario& s) {
  require_structure(s);
  return FirstBest{cost_deriv_inverse(s.cost, 1.0)};
}

}  // namespace linkage
