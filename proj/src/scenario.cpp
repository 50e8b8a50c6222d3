#include "linkage/scenario.hpp"

#include <cmath>

#include "linkage/mv.hpp"
#include "linkage/number_format.hpp"

namespace linkage {

namespace {

std::string fmt(double x) { return format_double(x); }

void check_gaussian(const GaussianParams& p) {
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) {
    throw StructuralError("mu must be positive and finite");
  }
  if (!(p.var_common_type >= 0.0) || !std::isfinite(p.var_common_type) ||
      !(p.var_common_shock >= 0.0) || !std::isfinite(p.var_common_shock)) {
    throw StructuralError("common variances must be nonnegative and finite");
  }
  if (!(p.var_idio_type > 0.0) || !std::isfinite(p.var_idio_type) ||
      !(p.var_idio_shock > 0.0) || !std::isfinite(p.var_idio_shock)) {
    throw StructuralError("idiosyncratic variances must be strictly positive");
  }
}

void check_general(const GeneralParams& p) {
  check_component(p.common_type);
  check_component(p.idio_type);
  check_component(p.common_shock);
  check_component(p.idio_shock);
  if (!(p.common_type.location > 0.0)) {
    throw StructuralError("common type location (the prior mean) must be > 0");
  }
  if (p.idio_type.location != 0.0 || p.common_shock.location != 0.0 ||
      p.idio_shock.location != 0.0) {
    throw StructuralError(
        "idiosyncratic type and both shock components must be centered at 0");
  }
}

}  // namespace

double Scenario::mean_type() const {
  if (gaussian) return gaussian->mu;
  return general->common_type.location + general->idio_type.location;
}

double Scenario::type_variance() const {
  return gaussian ? gaussian->type_variance() : general->type_variance();
}

double Scenario::shock_variance() const {
  return gaussian ? gaussian->shock_variance() : general->shock_variance();
}

Scenario Scenario::with_population(std::int64_t n) const {
  Scenario s = *this;
  s.population = n;
  return s;
}

Scenario Scenario::with_reward(double r) const {
  Scenario s = *this;
  s.reward = r;
  return s;
}

void require_structure(const Scenario& s) {
  if (s.gaussian.has_value() == s.general.has_value()) {
    throw StructuralError(
        "scenario must carry exactly one of gaussian/general parameters");
  }
  if (s.gaussian) check_gaussian(*s.gaussian);
  if (s.general) check_general(*s.general);
  if (s.population < 1) {
    throw StructuralError("population must be at least 1");
  }
  if (!std::isfinite(s.reward)) {
    throw StructuralError("reward must be finite");
  }
  if (!(s.cost.kappa > 0.0)) {
    throw StructuralError("cost kappa must be positive");
  }
  if (s.cost.family == CostFamily::Power && !(s.cost.gamma > 1.0)) {
    throw StructuralError("power cost gamma must exceed 1");
  }
}

bool ValidationReport::passed(const std::string& name) const {
  const AssumptionCheck* c = find(name);
  return c != nullptr && c->status == CheckStatus::Pass;
}

const AssumptionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_scenario(const Scenario& s) {
  require_structure(s);
  ValidationReport report;
  auto add = [&](std::string name, CheckStatus st, std::string detail) {
    report.checks.push_back({std::move(name), st, std::move(detail)});
  };

  add("density-regularity", CheckStatus::AssumedForFamily,
      "strictly positive C1 densities hold for every supported family");

  // Marginal type/shock distributions are defined as the convolution of the
  // common and idiosyncratic components, so they agree across linkage kinds
  // built from the same component variances by construction.
  add("marginal-invariance", CheckStatus::Pass,
      "type variance " + fmt(s.type_variance()) + ", shock variance " +
          fmt(s.shock_variance()) + " (component sums, kind-independent)");

  add("posterior-regularity", CheckStatus::AssumedForFamily,
      "smooth posterior expectations hold for every supported family");

  if (s.is_gaussian()) {
    add("finite-fisher-information", CheckStatus::AssumedForFamily,
        "holds for the Gaussian family");
    add("log-concavity", CheckStatus::Pass, "Gaussian densities");
  } else {
    add("finite-fisher-information", CheckStatus::AssumedForFamily,
        "tail-ratio sufficient condition holds for logistic and student-t");
    bool all_lc = dist_log_concave(s.general->common_type) &&
                  dist_log_concave(s.general->idio_type) &&
                  dist_log_concave(s.general->common_shock) &&
                  dist_log_concave(s.general->idio_shock);
    add("log-concavity", all_lc ? CheckStatus::Pass : CheckStatus::Fail,
        all_lc ? "all components strictly log-concave"
               : "student-t component present: admitted for density and "
                 "quadrature work only, excluded from equilibrium claims");
  }

  const double mu = s.mean_type();
  const double a1 = cost_deriv_inverse(s.cost, single_agent_marginal_value(s));
  const double entry_bound = cost_eval(s.cost, a1) - mu;
  add("individual-entry",
      s.reward >= entry_bound ? CheckStatus::Pass : CheckStatus::Fail,
      "reward " + fmt(s.reward) + " vs bound C(a*(1)) - mu = " +
          fmt(entry_bound));
  add("profitable-market",
      a1 + mu > s.reward ? CheckStatus::Pass : CheckStatus::Fail,
      "a*(1) + mu = " + fmt(a1 + mu) + " vs reward " + fmt(s.reward));

  if (s.is_gaussian()) {
    add("sufficient-convexity", CheckStatus::Pass,
        "Gaussian posterior means are linear; any convex cost suffices");
  } else {
    const bool gated = s.cost.family == CostFamily::Quadratic && s.cost.kappa >= 1.0;
    add("sufficient-convexity",
        gated ? CheckStatus::AssumedForFamily : CheckStatus::Fail,
        gated ? "non-Gaussian solving gated to quadratic cost with kappa >= 1"
              : "non-Gaussian equilibrium requires quadratic cost, kappa >= 1");
  }

  return report;
}

}  // namespace linkage
