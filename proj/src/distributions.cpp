#include "linkage/distributions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "linkage/errors.hpp"

namespace linkage {

namespace {

constexpr double kPi = std::numbers::pi;

double lgamma_safe(double x) { return std::lgamma(x); }

// Marsaglia-Tsang sampler for Gamma(shape, 1), shape >= 1 assumed after boost.
double sample_gamma(double shape, CounterStream& stream) {
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(stream.next_uniform(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.next_uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return boost * d * v;
  }
}

}  // namespace

ComponentDist ComponentDist::gaussian(double location, double scale) {
  ComponentDist d{DistFamily::Gaussian, location, scale, 0.0};
  check_component(d);
  return d;
}

ComponentDist ComponentDist::logistic(double location, double scale) {
  ComponentDist d{DistFamily::Logistic, location, scale, 0.0};
  check_component(d);
  return d;
}

ComponentDist ComponentDist::student_t(double location, double scale,
                                       double dof) {
  ComponentDist d{DistFamily::StudentT, location, scale, dof};
  check_component(d);
  return d;
}

ComponentDist ComponentDist::gaussian_with_variance(double location,
                                                    double variance) {
  return gaussian(location, std::sqrt(variance));
}

ComponentDist ComponentDist::logistic_with_variance(double location,
                                                    double variance) {
  return logistic(location, std::sqrt(3.0 * variance) / kPi);
}

ComponentDist ComponentDist::student_t_with_variance(double location,
                                                     double variance,
                                                     double dof) {
  return student_t(location, std::sqrt(variance * (dof - 2.0) / dof), dof);
}

void check_component(const ComponentDist& d) {
  if (!(d.scale > 0.0) || !std::isfinite(d.scale)) {
    throw StructuralError("component scale must be positive and finite");
  }
  if (!std::isfinite(d.location)) {
    throw StructuralError("component location must be finite");
  }
  if (d.family == DistFamily::StudentT && !(d.dof > 2.0)) {
    throw StructuralError("student-t dof must exceed 2 (finite variance)");
  }
}

double dist_mean(const ComponentDist& d) { return d.location; }

double dist_variance(const ComponentDist& d) {
  switch (d.family) {
    case DistFamily::Gaussian:
      return d.scale * d.scale;
    case DistFamily::Logistic:
      return d.scale * d.scale * kPi * kPi / 3.0;
    case DistFamily::StudentT:
      return d.scale * d.scale * d.dof / (d.dof - 2.0);
  }
  return 0.0;
}

double dist_sd(const ComponentDist& d) { return std::sqrt(dist_variance(d)); }

double dist_log_pdf(const ComponentDist& d, double x) {
  const double z = (x - d.location) / d.scale;
  switch (d.family) {
    case DistFamily::Gaussian:
      return -0.5 * z * z - std::log(d.scale) - 0.5 * std::log(2.0 * kPi);
    case DistFamily::Logistic: {
      // log f = -z - 2 log(1 + e^{-z}) - log(scale), written for large |z|
      const double a = std::fabs(z);
      return -a - 2.0 * std::log1p(std::exp(-a)) - std::log(d.scale);
    }
    case DistFamily::StudentT: {
      const double nu = d.dof;
      return lgamma_safe(0.5 * (nu + 1.0)) - lgamma_safe(0.5 * nu) -
             0.5 * std::log(nu * kPi) - std::log(d.scale) -
             0.5 * (nu + 1.0) * std::log1p(z * z / nu);
    }
  }
  return 0.0;
}

double dist_pdf(const ComponentDist& d, double x) {
  return std::exp(dist_log_pdf(d, x));
}

bool dist_log_concave(const ComponentDist& d) {
  return d.family != DistFamily::StudentT;
}

double dist_sample(const ComponentDist& d, CounterStream& stream) {
  switch (d.family) {
    case DistFamily::Gaussian:
      return d.location + d.scale * stream.next_normal();
    case DistFamily::Logistic: {
      const double u = stream.next_uniform();
      return d.location + d.scale * std::log(u / (1.0 - u));
    }
    case DistFamily::StudentT: {
      const double z = stream.next_normal();
      const double chi2 = 2.0 * sample_gamma(0.5 * d.dof, stream);
      return d.location + d.scale * z * std::sqrt(d.dof / chi2);
    }
  }
  return 0.0;
}

double dist_quantile(const ComponentDist& d, double u) {
  switch (d.family) {
    case DistFamily::Gaussian:
      return d.location + d.scale * inverse_normal_cdf(u);
    case DistFamily::Logistic:
      return d.location + d.scale * std::log(u / (1.0 - u));
    case DistFamily::StudentT:
      throw DomainError(
          "student-t has no closed-form quantile here; use GridDensity");
  }
  return 0.0;
}

}  // namespace linkage
