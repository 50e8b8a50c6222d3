#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkage/cost.hpp"
#include "linkage/distributions.hpp"

namespace linkage {

/// How outcomes are correlated across the segment.
///
/// Quality:      types share a common component, shocks are i.i.d.
/// Circumstance: shocks share a common component, types are i.i.d.
/// NoLinkage:    the principal conditions on the agent's own outcome only.
enum class LinkageKind { Quality, Circumstance, NoLinkage };

/// Gaussian component variances. The marginal type and shock variances are
/// the sums var_common_type + var_idio_type and var_common_shock +
/// var_idio_shock, and they are what the linkage kind acts on: a Quality
/// scenario treats the shock as i.i.d. with the full marginal variance, a
/// Circumstance scenario treats the type likewise.
struct GaussianParams {
  double mu = 1.0;               // prior mean of the type, > 0
  double var_common_type = 0.0;  // >= 0
  double var_idio_type = 1.0;    // > 0
  double var_common_shock = 0.0; // >= 0
  double var_idio_shock = 1.0;   // > 0

  double type_variance() const { return var_common_type + var_idio_type; }
  double shock_variance() const { return var_common_shock + var_idio_shock; }
};

/// Non-Gaussian parameterization: one distribution per latent component.
/// Locations are pinned to the model's mean conventions: the common type
/// carries the prior mean mu > 0, everything else is centered at zero.
struct GeneralParams {
  ComponentDist common_type;
  ComponentDist idio_type;
  ComponentDist common_shock;
  ComponentDist idio_shock;

  double type_variance() const {
    return dist_variance(common_type) + dist_variance(idio_type);
  }
  double shock_variance() const {
    return dist_variance(common_shock) + dist_variance(idio_shock);
  }
};

/// Full game description: linkage structure, distributional parameters,
/// effort cost, opt-in reward R, and population size N.
struct Scenario {
  LinkageKind kind = LinkageKind::Quality;
  std::optional<GaussianParams> gaussian;
  std::optional<GeneralParams> general;
  CostFunction cost;
  double reward = 0.0;
  std::int64_t population = 1;

  bool is_gaussian() const { return gaussian.has_value(); }
  double mean_type() const;
  double type_variance() const;
  double shock_variance() const;

  Scenario with_population(std::int64_t n) const;
  Scenario with_reward(double r) const;
};

/// Throws StructuralError unless the scenario is well-formed: exactly one of
/// gaussian/general present, variances positive where required, mu > 0,
/// population >= 1, component locations matching the mean conventions.
void require_structure(const Scenario& s);

enum class CheckStatus { Pass, Fail, AssumedForFamily };

struct AssumptionCheck {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  bool passed(const std::string& name) const;
  const AssumptionCheck* find(const std::string& name) const;
};

/// Runs every checkable model assumption and reports each outcome. Structural
/// problems throw; everything else (including a failing individual-entry
/// bound) is reported, not fatal, since the transfer analysis deliberately
/// explores rewards below that bound.
ValidationReport validate_scenario(const Scenario& s);

}  // namespace linkage
