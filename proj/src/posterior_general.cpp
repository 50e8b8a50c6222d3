#include "linkage/posterior_general.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "linkage/errors.hpp"
#include "linkage/quadrature.hpp"
#include "linkage/rng.hpp"

namespace linkage {

namespace {

constexpr int kGridSize = 4096;
constexpr double kSupportSds = 14.0;  // grid half-width per component
constexpr int kConvPanels = 12;
constexpr int kConvNodesPerPanel = 32;
constexpr int kMaxDoublings = 6;
constexpr std::int64_t kQmcPoints = 32768;
constexpr double kLogFloor = -745.0;  // below exp() underflow

struct DensityView {
  std::function<double(double)> log_pdf;
  double lo;
  double hi;
};

DensityView view_of(const ComponentDist& d) {
  const double sd = dist_sd(d);
  return {[d](double x) { return dist_log_pdf(d, x); },
          d.location - kSupportSds * sd, d.location + kSupportSds * sd};
}

DensityView view_of(const GridDensity& g) {
  return {[&g](double x) { return g.log_pdf(x); }, g.lo(), g.hi()};
}

// Tabulates the convolution (A + B) on [loA+loB, hiA+hiB]. When type_mean is
// non-null it also tabulates E[A | A + B = x] on the same grid, via the
// signed-weight ratio sum(t w) / sum(w) with a shared max-log subtraction.
GridDensity convolve(const DensityView& a, const DensityView& b,
                     std::vector<double>* type_mean) {
  const double lo = a.lo + b.lo;
  const double hi = a.hi + b.hi;
  const double dx = (hi - lo) / (kGridSize - 1);
  std::vector<double> log_pdf(kGridSize);
  if (type_mean) type_mean->assign(kGridSize, 0.0);

  const GaussLegendre& rule = gauss_legendre(kConvNodesPerPanel);
  for (int i = 0; i < kGridSize; ++i) {
    const double x = lo + i * dx;
    const double t_lo = std::max(a.lo, x - b.hi);
    const double t_hi = std::min(a.hi, x - b.lo);
    if (!(t_hi > t_lo)) {
      log_pdf[i] = kLogFloor;
      if (type_mean) (*type_mean)[i] = x;  // irrelevant: zero density
      continue;
    }
    // First pass: find the max log integrand across the panels.
    double max_lw = -std::numeric_limits<double>::infinity();
    const double panel = (t_hi - t_lo) / kConvPanels;
    for (int p = 0; p < kConvPanels; ++p) {
      const double c = t_lo + (p + 0.5) * panel;
      const double h = 0.5 * panel;
      for (int k = 0; k < kConvNodesPerPanel; ++k) {
        const double t = c + h * rule.nodes[k];
        max_lw = std::max(max_lw, a.log_pdf(t) + b.log_pdf(x - t));
      }
    }
    if (!std::isfinite(max_lw) || max_lw < kLogFloor) {
      log_pdf[i] = kLogFloor;
      if (type_mean) (*type_mean)[i] = x;
      continue;
    }
    double s0 = 0.0, s1 = 0.0;
    for (int p = 0; p < kConvPanels; ++p) {
      const double c = t_lo + (p + 0.5) * panel;
      const double h = 0.5 * panel;
      for (int k = 0; k < kConvNodesPerPanel; ++k) {
        const double t = c + h * rule.nodes[k];
        const double w =
            std::exp(a.log_pdf(t) + b.log_pdf(x - t) - max_lw) * rule.weights[k] * h;
        s0 += w;
        s1 += t * w;
      }
    }
    log_pdf[i] = s0 > 0.0 ? std::log(s0) + max_lw : kLogFloor;
    if (type_mean) (*type_mean)[i] = s0 > 0.0 ? s1 / s0 : x;
  }
  return GridDensity(lo, hi, std::move(log_pdf));
}

}  // namespace

void check_quadrature_config(const QuadratureConfig& cfg) {
  if (cfg.nodes < 16) {
    throw StructuralError("quadrature nodes must be at least 16");
  }
  if (!(cfg.truncation_sd >= 4.0)) {
    throw StructuralError("truncation_sd must be at least 4");
  }
  if (!(cfg.target_rel_tol > 0.0)) {
    throw StructuralError("target_rel_tol must be positive");
  }
}

void check_profile(const OutcomeProfile& profile) {
  if (profile.values.size() != profile.conjectured_actions.size()) {
    throw StructuralError("profile values/actions must have equal length");
  }
  if (profile.values.empty()) {
    throw StructuralError("profile must contain at least one outcome");
  }
  for (double v : profile.values) {
    if (!std::isfinite(v)) throw StructuralError("outcome values must be finite");
  }
  for (double a : profile.conjectured_actions) {
    if (!std::isfinite(a) || a < 0.0) {
      throw StructuralError("conjectured actions must be finite and >= 0");
    }
  }
}

GridDensity::GridDensity(double lo, double hi, std::vector<double> log_pdf)
    : lo_(lo), hi_(hi), dx_((hi - lo) / (double(log_pdf.size()) - 1.0)),
      log_pdf_(std::move(log_pdf)) {
  build_cdf();
}

GridDensity GridDensity::tabulate(const ComponentDist& d,
                                  double half_width_sds) {
  const double sd = dist_sd(d);
  const double lo = d.location - half_width_sds * sd;
  const double hi = d.location + half_width_sds * sd;
  std::vector<double> lp(kGridSize);
  const double dx = (hi - lo) / (kGridSize - 1);
  for (int i = 0; i < kGridSize; ++i) {
    lp[i] = dist_log_pdf(d, lo + i * dx);
  }
  return GridDensity(lo, hi, std::move(lp));
}

double GridDensity::log_pdf(double x) const {
  const int n = int(log_pdf_.size());
  const double u = (x - lo_) / dx_;
  if (u <= 0.0) {
    // linear log-tail from the first two points
    return log_pdf_[0] + (log_pdf_[1] - log_pdf_[0]) * u;
  }
  if (u >= n - 1.0) {
    return log_pdf_[n - 1] +
           (log_pdf_[n - 1] - log_pdf_[n - 2]) * (u - (n - 1.0));
  }
  int i = int(u);
  i = std::clamp(i, 1, n - 3);
  const double s = u - i;
  // Catmull-Rom through the four surrounding log-density samples.
  const double p0 = log_pdf_[i - 1], p1 = log_pdf_[i], p2 = log_pdf_[i + 1],
               p3 = log_pdf_[i + 2];
  return p1 + 0.5 * s * (p2 - p0 +
                         s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                              s * (3.0 * (p1 - p2) + p3 - p0)));
}

double GridDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

void GridDensity::build_cdf() {
  const int n = int(log_pdf_.size());
  cdf_.assign(n, 0.0);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 1; i < n; ++i) {
    const double f0 = std::exp(log_pdf_[i - 1]);
    const double f1 = std::exp(log_pdf_[i]);
    const double x0 = lo_ + (i - 1) * dx_;
    const double x1 = lo_ + i * dx_;
    cdf_[i] = cdf_[i - 1] + 0.5 * dx_ * (f0 + f1);
    m1 += 0.5 * dx_ * (f0 * x0 + f1 * x1);
    m2 += 0.5 * dx_ * (f0 * x0 * x0 + f1 * x1 * x1);
  }
  const double total = cdf_[n - 1];
  for (int i = 0; i < n; ++i) cdf_[i] /= total;
  mean_ = m1 / total;
  sd_ = std::sqrt(std::max(0.0, m2 / total - mean_ * mean_));
}

double GridDensity::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("quantile argument must lie in (0, 1)");
  }
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return lo_;
  if (it == cdf_.end()) return hi_;
  const int i = int(it - cdf_.begin());
  const double c0 = cdf_[i - 1], c1 = cdf_[i];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
  return lo_ + (i - 1 + frac) * dx_;
}

double GridDensity::cdf(double x) const {
  const int n = int(cdf_.size());
  const double u = (x - lo_) / dx_;
  if (u <= 0.0) return 0.0;
  if (u >= n - 1.0) return 1.0;
  const int i = int(u);
  const double frac = u - i;
  return cdf_[i] + (cdf_[i + 1] - cdf_[i]) * frac;
}

PosteriorModel::PosteriorModel(const Scenario& s, const QuadratureConfig& cfg)
    : cfg_(cfg) {
  require_structure(s);
  check_quadrature_config(cfg);
  if (!s.general) {
    throw StructuralError(
        "PosteriorModel requires general (component) parameters");
  }
  kind_ = s.kind;
  const GeneralParams& g = *s.general;
  type_mean_ = s.mean_type();

  std::vector<double> cond_mean;
  if (kind_ == LinkageKind::Quality) {
    // Common latent is the shared type component; the per-agent residual is
    // idio_type + (common_shock + idio_shock), the latter two behaving as one
    // i.i.d. shock per agent.
    common_ = g.common_type;
    GridDensity shock_mix =
        convolve(view_of(g.common_shock), view_of(g.idio_shock), nullptr);
    resid_ = convolve(view_of(g.idio_type), view_of(shock_mix), &cond_mean);
  } else {
    // Circumstance (or benchmark use): common latent is the shared shock; the
    // residual is the i.i.d. full type plus idio_shock.
    common_ = g.common_shock;
    GridDensity type_mix =
        convolve(view_of(g.common_type), view_of(g.idio_type), nullptr);
    resid_ = convolve(view_of(type_mix), view_of(g.idio_shock), &cond_mean);
  }
  common_mean_ = dist_mean(common_);
  common_sd_ = dist_sd(common_);
  common_grid_ = GridDensity::tabulate(common_, kSupportSds);
  g_ = std::move(cond_mean);
  g_lo_ = resid_.lo();
  g_dx_ = (resid_.hi() - resid_.lo()) / (double(g_.size()) - 1.0);
}

namespace {

double truncated_quantile(const GridDensity& grid, double center, double sd,
                          double truncation_sd, double u) {
  const double c_lo = grid.cdf(center - truncation_sd * sd);
  const double c_hi = grid.cdf(center + truncation_sd * sd);
  return grid.quantile(c_lo + u * (c_hi - c_lo));
}

}  // namespace

double PosteriorModel::quantile_common_truncated(double u) const {
  return truncated_quantile(common_grid_, common_mean_, common_sd_,
                            cfg_.truncation_sd, u);
}

double PosteriorModel::quantile_resid_truncated(double u) const {
  return truncated_quantile(resid_, resid_.mean(), resid_.sd(),
                            cfg_.truncation_sd, u);
}

double PosteriorModel::conditional_type_mean(double z, double x) const {
  // Interpolate the cached conditional mean (clamped to the grid).
  const int n = int(g_.size());
  double u = (x - g_lo_) / g_dx_;
  u = std::clamp(u, 0.0, double(n - 1));
  int i = std::clamp(int(u), 1, n - 3);
  const double sfrac = u - i;
  const double p0 = g_[i - 1], p1 = g_[i], p2 = g_[i + 1], p3 = g_[i + 2];
  const double m =
      p1 + 0.5 * sfrac * (p2 - p0 + sfrac * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                             sfrac * (3.0 * (p1 - p2) + p3 - p0)));
  return kind_ == LinkageKind::Quality ? z + m : m;
}

double PosteriorModel::posterior_mean_fixed(std::span<const double> values,
                                            std::span<const double> actions,
                                            std::int64_t agent,
                                            int nodes) const {
  const std::int64_t n = std::int64_t(values.size());
  if (agent < 0 || agent >= n) {
    throw StructuralError("agent index out of range");
  }
  const GaussLegendre& rule = gauss_legendre(nodes);
  const double center = common_mean_;
  const double half = cfg_.truncation_sd * common_sd_;

  double max_lw = -std::numeric_limits<double>::infinity();
  std::vector<double> lw(static_cast<size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    const double z = center + half * rule.nodes[k];
    double acc = common_grid_.log_pdf(z);
    for (std::int64_t j = 0; j < n; ++j) {
      acc += resid_.log_pdf(values[size_t(j)] - actions[size_t(j)] - z);
    }
    lw[size_t(k)] = acc;
    max_lw = std::max(max_lw, acc);
  }
  if (!std::isfinite(max_lw)) {
    throw AccuracyError("posterior weights underflowed the latent grid");
  }
  double numer = 0.0, denom = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double z = center + half * rule.nodes[k];
    const double w = rule.weights[k] * std::exp(lw[size_t(k)] - max_lw);
    const double x = values[size_t(agent)] - actions[size_t(agent)] - z;
    numer += w * conditional_type_mean(z, x);
    denom += w;
  }
  if (!(denom > 0.0)) {
    throw AccuracyError("posterior normalization vanished");
  }
  return numer / denom;
}

int PosteriorModel::resolve_nodes(std::span<const double> values,
                                  std::span<const double> actions,
                                  std::int64_t agent) const {
  const double scale = std::max(1.0, std::fabs(type_mean_));
  int nodes = cfg_.nodes;
  double prev = posterior_mean_fixed(values, actions, agent, nodes);
  for (int pass = 0; pass < kMaxDoublings; ++pass) {
    const int next = nodes * 2;
    const double cur = posterior_mean_fixed(values, actions, agent, next);
    const double rel = std::fabs(cur - prev) / std::max(std::fabs(cur), scale);
    if (rel <= cfg_.target_rel_tol) return next;
    prev = cur;
    nodes = next;
    if (pass == kMaxDoublings - 1 && rel > 10.0 * cfg_.target_rel_tol) {
      throw AccuracyError(
          "latent quadrature failed to converge: residual change " +
          std::to_string(rel));
    }
  }
  return nodes;
}

double PosteriorModel::posterior_mean(std::span<const double> values,
                                      std::span<const double> actions,
                                      std::int64_t agent) const {
  const int nodes = resolve_nodes(values, actions, agent);
  return posterior_mean_fixed(values, actions, agent, nodes);
}

double posterior_mean(const Scenario& s, const OutcomeProfile& profile,
                      std::int64_t agent, const QuadratureConfig& cfg) {
  check_profile(profile);
  PosteriorModel model(s, cfg);
  return model.posterior_mean(profile.values, profile.conjectured_actions,
                              agent);
}

double forecast_sensitivity(const PosteriorModel& model,
                            const OutcomeProfile& profile, std::int64_t agent,
                            std::int64_t wrt, double step) {
  check_profile(profile);
  if (wrt < 0 || wrt >= std::int64_t(profile.values.size())) {
    throw StructuralError("wrt index out of range");
  }
  if (!(step > 0.0)) throw DomainError("finite-difference step must be > 0");
  const int nodes = model.resolve_nodes(profile.values,
                                        profile.conjectured_actions, agent);
  std::vector<double> hi = profile.values;
  std::vector<double> lo = profile.values;
  hi[size_t(wrt)] += step;
  lo[size_t(wrt)] -= step;
  const double up =
      model.posterior_mean_fixed(hi, profile.conjectured_actions, agent, nodes);
  const double dn =
      model.posterior_mean_fixed(lo, profile.conjectured_actions, agent, nodes);
  return (up - dn) / (2.0 * step);
}

double forecast_sensitivity(const Scenario& s, const OutcomeProfile& profile,
                            std::int64_t agent, std::int64_t wrt,
                            const QuadratureConfig& cfg, double step) {
  if (step <= 0.0) {
    step = 1e-4 * std::sqrt(s.type_variance() + s.shock_variance());
  }
  PosteriorModel model(s, cfg);
  return forecast_sensitivity(model, profile, agent, wrt, step);
}

namespace {

// Deterministic Cranley-Patterson rotation per dimension, so plain Halton
// stripes cannot line up with the integrand.
double qmc_coordinate(std::uint64_t index, int dim) {
  const auto words = philox4x32(0x6c696e6bu, std::uint64_t(dim), 0);
  const double shift = (double(words[0]) + 0.5) / 4294967296.0;
  double u = halton(index + 64, dim) + shift;
  if (u >= 1.0) u -= 1.0;
  if (u <= 0.0) u = std::numeric_limits<double>::min();
  return u;
}

struct QmcSetup {
  PosteriorModel model;
  int nodes;
  std::vector<double> actions;

  QmcSetup(const Scenario& s, std::int64_t n, const QuadratureConfig& cfg)
      : model(s, cfg), actions(size_t(n), 0.0) {
    std::vector<double> mean_profile(size_t(n),
                                     model.type_mean());
    nodes = model.resolve_nodes(mean_profile, actions, 0) * 2;
  }
};

void check_general_population(const Scenario& s, std::int64_t n) {
  if (n < 1) throw DomainError("population must be at least 1");
  if (n > 12) {
    throw DomainError(
        "general-parameterization marginal values are capped at N = 12; "
        "use the Gaussian closed forms for larger populations");
  }
  if (!s.general) {
    throw StructuralError("quadrature marginal values need general parameters");
  }
}

}  // namespace

namespace {

// Single-agent expected forecast by a two-dimensional tensor rule over
// (common latent, residual): cheap enough for validation-time use.
double mu_single_agent(const QmcSetup& setup, const QuadratureConfig& cfg,
                       double delta) {
  const PosteriorModel& model = setup.model;
  const GaussLegendre& rule = gauss_legendre(160);
  const int order = int(rule.nodes.size());
  const double zc = model.common_mean();
  const double zh = cfg.truncation_sd * model.common_sd();
  const double uc = model.resid_grid().mean();
  const double uh = cfg.truncation_sd * model.resid_grid().sd();
  const double actions[1] = {0.0};
  double numer = 0.0, denom = 0.0;
  for (int i = 0; i < order; ++i) {
    const double z = zc + zh * rule.nodes[i];
    const double wz = rule.weights[i] * zh * model.common_grid().pdf(z);
    for (int j = 0; j < order; ++j) {
      const double u = uc + uh * rule.nodes[j];
      const double w = wz * rule.weights[j] * uh * model.resid_grid().pdf(u);
      const double value = z + u + delta;
      const double pm = model.posterior_mean_fixed(
          std::span<const double>(&value, 1), actions, 0, setup.nodes);
      numer += w * pm;
      denom += w;
    }
  }
  return numer / denom;
}

}  // namespace

double mu_quadrature(const Scenario& s, std::int64_t n,
                     const QuadratureConfig& cfg, double delta) {
  check_general_population(s, n);
  QmcSetup setup(s, n, cfg);
  if (n == 1) return mu_single_agent(setup, cfg, delta);
  std::vector<double> values(static_cast<size_t>(n));
  double acc = 0.0;
  for (std::int64_t m = 0; m < kQmcPoints; ++m) {
    const double z =
        setup.model.quantile_common_truncated(qmc_coordinate(m, 0));
    for (std::int64_t j = 0; j < n; ++j) {
      values[size_t(j)] =
          z + setup.model.quantile_resid_truncated(qmc_coordinate(m, int(j) + 1));
    }
    values[0] += delta;
    acc += setup.model.posterior_mean_fixed(values, setup.actions, 0,
                                            setup.nodes);
  }
  return acc / double(kQmcPoints);
}

double mv_quadrature(const Scenario& s, std::int64_t n,
                     const QuadratureConfig& cfg, double delta) {
  check_general_population(s, n);
  if (!(delta > 0.0)) throw DomainError("differencing delta must be positive");
  QmcSetup setup(s, n, cfg);
  if (n == 1) {
    return (mu_single_agent(setup, cfg, delta) -
            mu_single_agent(setup, cfg, -delta)) /
           (2.0 * delta);
  }
  std::vector<double> values(static_cast<size_t>(n));
  double acc = 0.0;
  for (std::int64_t m = 0; m < kQmcPoints; ++m) {
    const double z =
        setup.model.quantile_common_truncated(qmc_coordinate(m, 0));
    for (std::int64_t j = 0; j < n; ++j) {
      values[size_t(j)] =
          z + setup.model.quantile_resid_truncated(qmc_coordinate(m, int(j) + 1));
    }
    const double base = values[0];
    values[0] = base + delta;
    const double up = setup.model.posterior_mean_fixed(values, setup.actions,
                                                       0, setup.nodes);
    values[0] = base - delta;
    const double dn = setup.model.posterior_mean_fixed(values, setup.actions,
                                                       0, setup.nodes);
    values[0] = base;
    acc += (up - dn) / (2.0 * delta);
  }
  return acc / double(kQmcPoints);
}

GeneralParams gaussian_as_general(const GaussianParams& p) {
  GeneralParams g;
  // A zero-variance common component has no grid; give it a negligible one.
  const double tiny = 1e-12;
  g.common_type = ComponentDist::gaussian(
      p.mu, std::sqrt(std::max(p.var_common_type, tiny)));
  g.idio_type = ComponentDist::gaussian(0.0, std::sqrt(p.var_idio_type));
  g.common_shock = ComponentDist::gaussian(
      0.0, std::sqrt(std::max(p.var_common_shock, tiny)));
  g.idio_shock = ComponentDist::gaussian(0.0, std::sqrt(p.var_idio_shock));
  return g;
}

}  // namespace linkage
