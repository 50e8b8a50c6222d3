#pragma once

#include <cmath>
#include <vector>

#include "linkage/rng.hpp"
#include "linkage/scenario.hpp"

namespace linkage::testing {

// Quality canonical: mu = 1, type split (1, 1), i.i.d. shock variance 1.
inline Scenario quality_canonical(double reward = 0.0, std::int64_t n = 2) {
  Scenario s;
  s.kind = LinkageKind::Quality;
  s.gaussian = GaussianParams{1.0, 1.0, 1.0, 0.0, 1.0};
  s.cost = CostFunction::quadratic(1.0);
  s.reward = reward;
  s.population = n;
  return s;
}

// Circumstance canonical: mu = 1, i.i.d. type variance 2, shock split
// (0.5, 0.5). Same marginals as the quality canonical.
inline Scenario circumstance_canonical(double reward = -0.76,
                                       std::int64_t n = 2) {
  Scenario s;
  s.kind = LinkageKind::Circumstance;
  s.gaussian = GaussianParams{1.0, 0.0, 2.0, 0.5, 0.5};
  s.cost = CostFunction::quadratic(1.0);
  s.reward = reward;
  s.population = n;
  return s;
}

inline Scenario no_linkage_canonical(double reward = 0.0, std::int64_t n = 2) {
  Scenario s = quality_canonical(reward, n);
  s.kind = LinkageKind::NoLinkage;
  return s;
}

// Paired scenarios from one component-variance tuple: identical marginals,
// opposite linkage kinds.
struct ScenarioPair {
  Scenario quality;
  Scenario circumstance;
};

// All-logistic components with variances (1, 1, 0.5, 0.5): the same type and
// shock marginals (2 and 1) as the canonical Gaussian pair.
inline ScenarioPair logistic_pair(double reward = 0.0) {
  GeneralParams g;
  g.common_type = ComponentDist::logistic_with_variance(1.0, 1.0);
  g.idio_type = ComponentDist::logistic_with_variance(0.0, 1.0);
  g.common_shock = ComponentDist::logistic_with_variance(0.0, 0.5);
  g.idio_shock = ComponentDist::logistic_with_variance(0.0, 0.5);
  ScenarioPair pair;
  pair.quality.kind = LinkageKind::Quality;
  pair.quality.general = g;
  pair.quality.cost = CostFunction::quadratic(1.0);
  pair.quality.reward = reward;
  pair.quality.population = 2;
  pair.circumstance = pair.quality;
  pair.circumstance.kind = LinkageKind::Circumstance;
  return pair;
}

inline ScenarioPair random_gaussian_pair(CounterStream& stream,
                                         double reward = 0.0) {
  auto log_uniform = [&](double lo, double hi) {
    return lo * std::exp(stream.next_uniform() * std::log(hi / lo));
  };
  const double vct = log_uniform(0.1, 10.0);
  const double vit = log_uniform(0.1, 10.0);
  const double vcs = log_uniform(0.1, 10.0);
  const double vis = log_uniform(0.1, 10.0);
  const double mu = 5.0 * stream.next_uniform();

  ScenarioPair pair;
  pair.quality.kind = LinkageKind::Quality;
  pair.quality.gaussian = GaussianParams{mu, vct, vit, vcs, vis};
  pair.quality.cost = CostFunction::quadratic(1.0);
  pair.quality.reward = reward;
  pair.quality.population = 2;
  pair.circumstance = pair.quality;
  pair.circumstance.kind = LinkageKind::Circumstance;
  return pair;
}

}  // namespace linkage::testing
