#pragma once

#include "linkage/rng.hpp"

namespace linkage {

enum class DistFamily { Gaussian, Logistic, StudentT };

/// One latent component of the outcome equation.
///
/// `scale` is the family's natural scale parameter, not the standard
/// deviation: Gaussian sd = scale, logistic sd = scale*pi/sqrt(3),
/// Student-t sd = scale*sqrt(dof/(dof-2)) (dof > 2 so the variance exists).
struct ComponentDist {
  DistFamily family = DistFamily::Gaussian;
  double location = 0.0;
  double scale = 1.0;
  double dof = 0.0;  // StudentT only

  static ComponentDist gaussian(double location, double scale);
  static ComponentDist logistic(double location, double scale);
  static ComponentDist student_t(double location, double scale, double dof);

  /// Convenience builders that pick the scale matching a target variance.
  static ComponentDist gaussian_with_variance(double location, double variance);
  static ComponentDist logistic_with_variance(double location, double variance);
  static ComponentDist student_t_with_variance(double location, double variance,
                                               double dof);
};

void check_component(const ComponentDist& d);  // throws StructuralError

double dist_mean(const ComponentDist& d);
double dist_variance(const ComponentDist& d);
double dist_sd(const ComponentDist& d);
double dist_pdf(const ComponentDist& d, double x);
double dist_log_pdf(const ComponentDist& d, double x);

/// Strict log-concavity of the density. Gaussian and logistic qualify;
/// Student-t does not and is admitted for density work only.
bool dist_log_concave(const ComponentDist& d);

/// One draw from the component. Student-t consumes a variable number of
/// uniforms (normal/chi-square construction); the others invert the CDF.
double dist_sample(const ComponentDist& d, CounterStream& stream);

/// Quantile for the families with a closed-form inverse CDF
/// (Gaussian, logistic). Student-t callers go through GridDensity.
double dist_quantile(const ComponentDist& d, double u);

}  // namespace linkage
