#pragma once

#include <cstdint>

#include "linkage/scenario.hpp"

namespace linkage {

/// Marginal value of effort MV(N): the slope at zero of the agent's expected
/// forecast with respect to a unilateral effort deviation. Dispatches to the
/// Gaussian closed forms or to quadrature for general component scenarios
/// (the latter capped at N <= 12). NoLinkage scenarios return the
/// single-agent value for every N.
double marginal_value(const Scenario& s, std::int64_t n);

/// MV(1), shared by both linkage kinds with matching marginals.
double single_agent_marginal_value(const Scenario& s);

/// Limit of MV(N) as the population grows (Gaussian scenarios only).
double marginal_value_limit(const Scenario& s);

}  // namespace linkage
