#include "linkage/mv.hpp"

#include "linkage/errors.hpp"
#include "linkage/gaussian_engine.hpp"
#include "linkage/posterior_general.hpp"

namespace linkage {

double marginal_value(const Scenario& s, std::int64_t n) {
  require_structure(s);
  if (n < 1) throw DomainError("population must be at least 1");
  if (s.kind == LinkageKind::NoLinkage) return single_agent_marginal_value(s);
  if (s.is_gaussian()) {
    return s.kind == LinkageKind::Quality
               ? mv_closed_quality(*s.gaussian, double(n))
               : mv_closed_circumstance(*s.gaussian, double(n));
  }
  return mv_quadrature(s, n);
}

double single_agent_marginal_value(const Scenario& s) {
  require_structure(s);
  if (s.is_gaussian()) {
    const double vt = s.gaussian->type_variance();
    const double ve = s.gaussian->shock_variance();
    return vt / (vt + ve);
  }
  return mv_quadrature(s, 1);
}

double marginal_value_limit(const Scenario& s) {
  require_structure(s);
  if (!s.is_gaussian()) {
    throw DomainError("closed-form limits are available for Gaussian scenarios");
  }
  switch (s.kind) {
    case LinkageKind::Quality:
      return mv_quality_limit(*s.gaussian);
    case LinkageKind::Circumstance:
      return mv_circumstance_limit(*s.gaussian);
    case LinkageKind::NoLinkage:
      return single_agent_marginal_value(s);
  }
  return 0.0;
}

}  // namespace linkage
