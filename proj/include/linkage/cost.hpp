#pragma once

#include "linkage/errors.hpp"

namespace linkage {

enum class CostFamily { Quadratic, Power };

/// Convex effort cost with closed-form derivative and inverses.
///
/// Quadratic: C(a) = kappa * a^2 / 2.
/// Power:     C(a) = kappa * a^gamma with gamma > 1 (note the different
///            kappa convention: no 1/gamma factor).
///
/// Both satisfy C(0) = C'(0) = 0, C'' > 0 on (0, inf), and C' unbounded.
struct CostFunction {
  CostFamily family = CostFamily::Quadratic;
  double kappa = 1.0;
  double gamma = 2.0;  // meaningful for Power only; Quadratic pins 2

  static CostFunction quadratic(double kappa);
  static CostFunction power(double kappa, double gamma);
};

double cost_eval(const CostFunction& c, double a);
double cost_deriv(const CostFunction& c, double a);

/// Inverse of C' on [0, inf): the effort whose marginal cost is m.
double cost_deriv_inverse(const CostFunction& c, double m);

/// Inverse of C on [0, inf): the effort whose total cost is v.
double cost_inverse(const CostFunction& c, double v);

}  // namespace linkage
