#pragma once

#include <cstdint>

#include "linkage/posterior_general.hpp"
#include "linkage/scenario.hpp"

namespace linkage {

struct OracleConfig {
  std::int64_t draws = 1'000'000;  // >= 10'000
  std::uint64_t seed = 0;
  double delta = 1e-2;  // differencing step for estimate_mv
  bool antithetic = true;
  QuadratureConfig quadrature;  // inner posterior settings (general scenarios)
};

void check_oracle_config(const OracleConfig& cfg);

struct OracleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t draws_used = 0;
};

/// Brute-force estimate of mu_N(delta): draw latent components with agent 1
/// deviating by delta, evaluate the principal's posterior mean at the
/// conjectured effort level, average. Deterministic for a fixed
/// (scenario, N, delta, config): work is chunked over counter-based streams
/// and merged by chunk index, so thread scheduling cannot reorder the sum.
OracleEstimate simulate_mu(const Scenario& s, std::int64_t n, double delta,
                           const OracleConfig& cfg,
                           double conjectured_action = 0.0);

/// Central difference (mu(+delta) - mu(-delta)) / (2 delta) with identical
/// draws on both sides; the deviation shifts agent 1's outcome additively, so
/// common draws difference exactly. The standard error comes from the
/// differenced per-draw statistic.
OracleEstimate estimate_mv(const Scenario& s, std::int64_t n,
                           const OracleConfig& cfg,
                           double conjectured_action = 0.0);

}  // namespace linkage
