#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "linkage/scenario.hpp"

namespace linkage {

/// Controls for the nested quadrature over the common latent variable.
struct QuadratureConfig {
  int nodes = 96;            // starting Gauss-Legendre order, >= 16
  double truncation_sd = 8.0;  // half-width of the latent interval, >= 4
  double target_rel_tol = 1e-6;
};

void check_quadrature_config(const QuadratureConfig& cfg);

/// Realized outcomes together with the effort levels the principal conjectures
/// behind them.
struct OutcomeProfile {
  std::vector<double> values;
  std::vector<double> conjectured_actions;
};

void check_profile(const OutcomeProfile& profile);

/// One-dimensional density tabulated on a uniform grid: cubic interpolation
/// of the log density inside the grid, linear log-tails outside, with a
/// cached CDF for quantile lookups.
class GridDensity {
 public:
  GridDensity() = default;
  GridDensity(double lo, double hi, std::vector<double> log_pdf);

  static GridDensity tabulate(const ComponentDist& d, double half_width_sds);

  double log_pdf(double x) const;
  double pdf(double x) const;
  double quantile(double u) const;  // u in (0, 1)
  double cdf(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mean() const { return mean_; }
  double sd() const { return sd_; }

 private:
  void build_cdf();

  double lo_ = 0.0, hi_ = 1.0, dx_ = 1.0;
  double mean_ = 0.0, sd_ = 1.0;
  std::vector<double> log_pdf_;
  std::vector<double> cdf_;
};

/// Per-scenario cache for non-Gaussian posterior work. Construction builds
/// the convolution grids (per-agent residual density given the common latent,
/// and the conditional mean of the type part given that residual); afterwards
/// the object is immutable and safe for concurrent readers.
///
/// The factor structure makes everything one-dimensional: conditional on the
/// common latent z (the shared type under a quality linkage, the shared shock
/// under circumstance), outcomes are independent with
///   S_j = a_j + z + u_j,     u_j ~ residual density,
/// and the posterior over z has unnormalized log weight
///   log f_common(z) + sum_j log f_resid(S_j - a_j - z).
class PosteriorModel {
 public:
  PosteriorModel(const Scenario& s, const QuadratureConfig& cfg);

  /// E[theta_agent | S] with a fixed Gauss-Legendre order for the z-integral.
  double posterior_mean_fixed(std::span<const double> values,
                              std::span<const double> actions,
                              std::int64_t agent, int nodes) const;

  /// Adaptive node doubling up to the configured relative tolerance.
  double posterior_mean(std::span<const double> values,
                        std::span<const double> actions,
                        std::int64_t agent) const;

  /// The node count the adaptive rule settles on for this profile.
  int resolve_nodes(std::span<const double> values,
                    std::span<const double> actions, std::int64_t agent) const;

  LinkageKind kind() const { return kind_; }
  const QuadratureConfig& config() const { return cfg_; }
  double common_mean() const { return common_mean_; }
  double common_sd() const { return common_sd_; }
  double type_mean() const { return type_mean_; }
  double quantile_common(double u) const { return common_grid_.quantile(u); }
  double quantile_resid(double u) const { return resid_.quantile(u); }

  /// Quantiles of the distributions truncated to mean +- truncation_sd * sd:
  /// the sampling measure for the outer integration, matching the window the
  /// latent quadrature itself covers. Draws outside that window would land on
  /// density values the grids cannot support.
  double quantile_common_truncated(double u) const;
  double quantile_resid_truncated(double u) const;

  const GridDensity& common_grid() const { return common_grid_; }
  const GridDensity& resid_grid() const { return resid_; }

 private:
  double conditional_type_mean(double z, double x) const;

  LinkageKind kind_;
  QuadratureConfig cfg_;
  ComponentDist common_;
  double common_mean_ = 0.0, common_sd_ = 1.0, type_mean_ = 0.0;
  GridDensity common_grid_;
  GridDensity resid_;
  // conditional mean of the type part given residual = x, on resid_'s grid
  double g_lo_ = 0.0, g_dx_ = 1.0;
  std::vector<double> g_;
};

/// E[theta_agent | S] for a general-parameterization scenario.
double posterior_mean(const Scenario& s, const OutcomeProfile& profile,
                      std::int64_t agent, const QuadratureConfig& cfg = {});

/// Central finite difference of the posterior mean in the wrt-th outcome.
/// step <= 0 selects the default 1e-4 times the outcome scale.
double forecast_sensitivity(const Scenario& s, const OutcomeProfile& profile,
                            std::int64_t agent, std::int64_t wrt,
                            const QuadratureConfig& cfg = {},
                            double step = 0.0);

/// Same finite difference on a prebuilt model (reuses the convolution grids
/// across many profiles).
double forecast_sensitivity(const PosteriorModel& model,
                            const OutcomeProfile& profile, std::int64_t agent,
                            std::int64_t wrt, double step);

/// Expected principal forecast E^delta[E^0[theta_1 | S]] when agent 1
/// deviates by delta, integrated by quasi-Monte Carlo over the latent space.
double mu_quadrature(const Scenario& s, std::int64_t n,
                     const QuadratureConfig& cfg, double delta);

/// Marginal value of effort by central differencing of mu_quadrature on
/// common quasi-Monte Carlo nodes. Capped at n <= 12.
double mv_quadrature(const Scenario& s, std::int64_t n,
                     const QuadratureConfig& cfg = {}, double delta = 1e-3);

/// The general-parameterization view of a Gaussian scenario (same variances,
/// Gaussian components): used to cross-check the quadrature machinery.
GeneralParams gaussian_as_general(const GaussianParams& p);

}  // namespace linkage
