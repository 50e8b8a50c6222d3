#include "linkage/mv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include <Eigen/Core>

#include "linkage/errors.hpp"
#include "linkage/gaussian_engine.hpp"
#include "linkage/rng.hpp"

namespace linkage {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

void check_population_for(const Scenario& s, std::int64_t n) {
  if (n < 1) throw DomainError("population must be at least 1");
  if (!s.is_gaussian() && n > 12) {
    throw DomainError("general-parameterization oracle is capped at N = 12");
  }
}

// Simulates outcome vectors under the physical measure. The antithetic
// partner of a draw mirrors only agent 0's idiosyncratic shock; every shock
// component is symmetric about zero, so the mirrored shock is the negated
// value of the original draw and everything else is drawn fresh.
class Sampler {
 public:
  Sampler(const Scenario& s, std::int64_t n, double conjectured_action)
      : s_(s), n_(n), action_(conjectured_action) {}

  void draw(CounterStream& stream, bool mirror, double& stored_shock,
            Eigen::VectorXd& out) const {
    const bool quality = s_.kind != LinkageKind::Circumstance;
    if (s_.is_gaussian()) {
      const GaussianParams& p = *s_.gaussian;
      if (quality) {
        const double common =
            p.mu + std::sqrt(p.var_common_type) * stream.next_normal();
        const double sd_it = std::sqrt(p.var_idio_type);
        const double sd_e = std::sqrt(p.shock_variance());
        for (std::int64_t j = 0; j < n_; ++j) {
          const double theta = common + sd_it * stream.next_normal();
          double shock = sd_e * stream.next_normal();
          if (j == 0) shock = mirrored(mirror, stored_shock, shock);
          out[j] = theta + action_ + shock;
        }
      } else {
        const double common_shock =
            std::sqrt(p.var_common_shock) * stream.next_normal();
        const double sd_t = std::sqrt(p.type_variance());
        const double sd_ie = std::sqrt(p.var_idio_shock);
        for (std::int64_t j = 0; j < n_; ++j) {
          const double theta = p.mu + sd_t * stream.next_normal();
          double shock = sd_ie * stream.next_normal();
          if (j == 0) shock = mirrored(mirror, stored_shock, shock);
          out[j] = theta + action_ + common_shock + shock;
        }
      }
      return;
    }
    const GeneralParams& g = *s_.general;
    if (quality) {
      const double common = dist_sample(g.common_type, stream);
      for (std::int64_t j = 0; j < n_; ++j) {
        const double theta = common + dist_sample(g.idio_type, stream);
        // i.i.d. shock per agent: independent copies of both components
        double shock = dist_sample(g.common_shock, stream) +
                       dist_sample(g.idio_shock, stream);
        if (j == 0) shock = mirrored(mirror, stored_shock, shock);
        out[j] = theta + action_ + shock;
      }
    } else {
      const double common_shock = dist_sample(g.common_shock, stream);
      for (std::int64_t j = 0; j < n_; ++j) {
        const double theta = dist_sample(g.common_type, stream) +
                             dist_sample(g.idio_type, stream);
        double shock = dist_sample(g.idio_shock, stream);
        if (j == 0) shock = mirrored(mirror, stored_shock, shock);
        out[j] = theta + action_ + common_shock + shock;
      }
    }
  }

 private:
  static double mirrored(bool mirror, double& stored, double fresh) {
    if (mirror) return -stored;
    stored = fresh;
    return fresh;
  }

  const Scenario& s_;
  std::int64_t n_;
  double action_;
};

using Statistic = std::function<double(const Eigen::VectorXd&)>;

struct ChunkStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t units = 0;
};

OracleEstimate run_chunks(const Scenario& s, std::int64_t n,
                          const OracleConfig& cfg, double conjectured_action,
                          const Statistic& stat) {
  Sampler sampler(s, n, conjectured_action);
  const std::int64_t chunks = (cfg.draws + kChunk - 1) / kChunk;

  auto run_one = [&](std::int64_t chunk_index) {
    CounterStream stream(cfg.seed, std::uint64_t(chunk_index));
    const std::int64_t lo = chunk_index * kChunk;
    const std::int64_t hi = std::min(lo + kChunk, cfg.draws);
    ChunkStats stats;
    Eigen::VectorXd outcome(n);
    double stored_shock = 0.0;
    std::int64_t i = lo;
    while (i < hi) {
      double unit;
      if (cfg.antithetic && i + 1 < hi) {
        sampler.draw(stream, false, stored_shock, outcome);
        const double a = stat(outcome);
        sampler.draw(stream, true, stored_shock, outcome);
        const double b = stat(outcome);
        unit = 0.5 * (a + b);
        i += 2;
      } else {
        sampler.draw(stream, false, stored_shock, outcome);
        unit = stat(outcome);
        i += 1;
      }
      stats.sum += unit;
      stats.sum_sq += unit * unit;
      stats.units += 1;
    }
    return stats;
  };

  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::vector<ChunkStats> results(static_cast<size_t>(chunks));
  std::int64_t next = 0;
  std::mutex gate;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers && w < unsigned(chunks); ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t idx;
        {
          std::lock_guard<std::mutex> lock(gate);
          if (next >= chunks) return;
          idx = next++;
        }
        results[size_t(idx)] = run_one(idx);
      }
    });
  }
  for (auto& t : pool) t.join();

  // Merge in chunk order: bit-identical regardless of thread count.
  double sum = 0.0, sum_sq = 0.0;
  std::int64_t units = 0;
  for (const ChunkStats& c : results) {
    sum += c.sum;
    sum_sq += c.sum_sq;
    units += c.units;
  }
  OracleEstimate est;
  est.value = sum / double(units);
  const double var =
      std::max(0.0, sum_sq / double(units) - est.value * est.value);
  est.std_error = std::sqrt(var / double(units));
  est.draws_used = cfg.draws;
  return est;
}

Statistic make_posterior_stat(const Scenario& s, std::int64_t n,
                              const OracleConfig& cfg,
                              double conjectured_action) {
  if (s.is_gaussian()) {
    auto posterior =
        std::make_shared<GaussianPosterior>(s, n, 0, conjectured_action);
    return [posterior](const Eigen::VectorXd& outcome) {
      return (*posterior)(outcome);
    };
  }
  auto model = std::make_shared<PosteriorModel>(s, cfg.quadrature);
  auto actions = std::make_shared<std::vector<double>>(size_t(n),
                                                       conjectured_action);
  std::vector<double> mean_profile(size_t(n),
                                   model->type_mean() + conjectured_action);
  const int nodes = model->resolve_nodes(mean_profile, *actions, 0) * 2;
  return [model, actions, nodes](const Eigen::VectorXd& outcome) {
    return model->posterior_mean_fixed(
        std::span<const double>(outcome.data(), size_t(outcome.size())),
        *actions, 0, nodes);
  };
}

}  // namespace

void check_oracle_config(const OracleConfig& cfg) {
  if (cfg.draws < 10'000) {
    throw StructuralError("oracle draws must be at least 10^4");
  }
  if (!(cfg.delta > 0.0)) {
    throw StructuralError("oracle delta must be positive");
  }
  check_quadrature_config(cfg.quadrature);
}

OracleEstimate simulate_mu(const Scenario& s, std::int64_t n, double delta,
                           const OracleConfig& cfg,
                           double conjectured_action) {
  require_structure(s);
  check_oracle_config(cfg);
  check_population_for(s, n);
  Statistic posterior = make_posterior_stat(s, n, cfg, conjectured_action);
  Statistic stat = [posterior, delta](const Eigen::VectorXd& outcome) {
    Eigen::VectorXd shifted = outcome;
    shifted[0] += delta;
    return posterior(shifted);
  };
  return run_chunks(s, n, cfg, conjectured_action, stat);
}

OracleEstimate estimate_mv(const Scenario& s, std::int64_t n,
                           const OracleConfig& cfg,
                           double conjectured_action) {
  require_structure(s);
  check_oracle_config(cfg);
  check_population_for(s, n);
  Statistic posterior = make_posterior_stat(s, n, cfg, conjectured_action);
  const double delta = cfg.delta;
  Statistic stat = [posterior, delta](const Eigen::VectorXd& outcome) {
    Eigen::VectorXd shifted = outcome;
    shifted[0] = outcome[0] + delta;
    const double up = posterior(shifted);
    shifted[0] = outcome[0] - delta;
    const double dn = posterior(shifted);
    return (up - dn) / (2.0 * delta);
  };
  return run_chunks(s, n, cfg, conjectured_action, stat);
}

}  // namespace linkage
