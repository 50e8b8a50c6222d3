#include "linkage/cost.hpp"

#include <cmath>
#include <string>

namespace linkage {

namespace {

void check_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw DomainError(std::string(what) + " must be nonnegative, got " +
                      std::to_string(x));
  }
}

}  // namespace

CostFunction CostFunction::quadratic(double kappa) {
  if (!(kappa > 0.0)) {
    throw StructuralError("cost kappa must be positive");
  }
  return CostFunction{CostFamily::Quadratic, kappa, 2.0};
}

CostFunction CostFunction::power(double kappa, double gamma) {
  if (!(kappa > 0.0)) {
    throw StructuralError("cost kappa must be positive");
  }
  if (!(gamma > 1.0)) {
    throw StructuralError("power cost gamma must exceed 1");
  }
  return CostFunction{CostFamily::Power, kappa, gamma};
}

double cost_eval(const CostFunction& c, double a) {
  check_nonnegative(a, "effort");
  if (c.family == CostFamily::Quadratic) {
    return 0.5 * c.kappa * a * a;
  }
  return c.kappa * std::pow(a, c.gamma);
}

double cost_deriv(const CostFunction& c, double a) {
  check_nonnegative(a, "effort");
  if (c.family == CostFamily::Quadratic) {
    return c.kappa * a;
  }
  return c.kappa * c.gamma * std::pow(a, c.gamma - 1.0);
}

double cost_deriv_inverse(const CostFunction& c, double m) {
  check_nonnegative(m, "marginal cost");
  if (c.family == CostFamily::Quadratic) {
    return m / c.kappa;
  }
  return std::pow(m / (c.kappa * c.gamma), 1.0 / (c.gamma - 1.0));
}

double cost_inverse(const CostFunction& c, double v) {
  check_nonnegative(v, "cost value");
  if (c.family == CostFamily::Quadratic) {
    return std::sqrt(2.0 * v / c.kappa);
  }
  return std::pow(v / c.kappa, 1.0 / c.gamma);
}

}  // namespace linkage
