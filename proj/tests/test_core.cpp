#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "linkage/cost.hpp"
#include "linkage/distributions.hpp"
#include "linkage/posterior_general.hpp"
#include "linkage/scenario.hpp"
#include "linkage/scenario_json.hpp"
#include "test_helpers.hpp"

using namespace linkage;
using namespace linkage::testing;

namespace {

// Independent inversion oracle: bisection on a monotone function.
double bisect_inverse(const std::function<double(double)>& f, double target,
                      double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cost evaluation and derivatives") {
  const CostFunction quad = CostFunction::quadratic(1.0);
  CHECK(cost_eval(quad, 2.0) == doctest::Approx(2.0));
  CHECK(cost_deriv(quad, 0.625) == doctest::Approx(0.625));
  CHECK(cost_deriv_inverse(quad, 0.625) == doctest::Approx(0.625));

  const CostFunction cubic = CostFunction::power(1.0, 3.0);
  CHECK(cost_eval(cubic, 2.0) == doctest::Approx(8.0));
  CHECK(cost_deriv(cubic, 2.0) == doctest::Approx(12.0));

  // Algebraic inversion checked against the bisection oracle.
  const double inv = cost_inverse(quad, 0.48);
  CHECK(inv == doctest::Approx(std::sqrt(0.96)).epsilon(1e-12));
  const double oracle = bisect_inverse(
      [&](double a) { return cost_eval(quad, a); }, 0.48, 0.0, 10.0);
  CHECK(inv == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("cost round-trip identities over a log-spaced grid") {
  for (const CostFunction& c :
       {CostFunction::quadratic(1.0), CostFunction::quadratic(3.7),
        CostFunction::power(1.0, 3.0), CostFunction::power(0.4, 1.6),
        CostFunction::power(2.2, 2.5)}) {
    for (double a = 1e-6; a <= 1e3; a *= 3.1622776601683795) {
      const double rt1 = cost_deriv_inverse(c, cost_deriv(c, a));
      CHECK(std::fabs(rt1 - a) / a <= 1e-10);
      const double rt2 = cost_inverse(c, cost_eval(c, a));
      CHECK(std::fabs(rt2 - a) / a <= 1e-10);
    }
  }
}

TEST_CASE("cost domain errors") {
  const CostFunction quad = CostFunction::quadratic(1.0);
  CHECK_THROWS_AS(cost_eval(quad, -0.1), DomainError);
  CHECK_THROWS_AS(cost_deriv_inverse(quad, -1.0), DomainError);
  CHECK_THROWS_AS(CostFunction::quadratic(0.0), StructuralError);
  CHECK_THROWS_AS(CostFunction::power(1.0, 1.0), StructuralError);
}

TEST_CASE("log-concavity holds strictly for gaussian and logistic") {
  CounterStream stream(7, 0);
  // numerical curvature of -log f; these families are least curved at the
  // endpoint farther from the center, bounding the whole segment
  auto curvature = [](const ComponentDist& d, double x) {
    const double h = 1e-4 * dist_sd(d);
    return -(dist_log_pdf(d, x + h) - 2.0 * dist_log_pdf(d, x) +
             dist_log_pdf(d, x - h)) /
           (h * h);
  };
  for (const ComponentDist& d :
       {ComponentDist::gaussian(0.3, 1.7), ComponentDist::logistic(-1.0, 0.8)}) {
    REQUIRE(dist_log_concave(d));
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
      const double sd = dist_sd(d);
      const double a = d.location + (stream.next_uniform() - 0.5) * 12.0 * sd;
      const double b = d.location + (stream.next_uniform() - 0.5) * 12.0 * sd;
      if (std::fabs(a - b) < 1e-3 * sd) continue;
      const double mid = 0.5 * (a + b);
      const double gap = dist_log_pdf(d, mid) -
                         0.5 * (dist_log_pdf(d, a) + dist_log_pdf(d, b));
      // midpoint identity: gap >= (b - a)^2 / 8 * min curvature on [a, b]
      const double floor = std::min(curvature(d, a), curvature(d, b));
      CHECK(floor > 0.0);
      CHECK(gap >= 0.5 * floor * (b - a) * (b - a) / 8.0);
      ++checked;
    }
    CHECK(checked > 900);
  }
  CHECK_FALSE(dist_log_concave(ComponentDist::student_t(0.0, 1.0, 5.0)));
}

TEST_CASE("component invariants") {
  CHECK_THROWS_AS(ComponentDist::gaussian(0.0, 0.0), StructuralError);
  CHECK_THROWS_AS(ComponentDist::student_t(0.0, 1.0, 2.0), StructuralError);
  const ComponentDist lg = ComponentDist::logistic_with_variance(0.0, 1.0);
  CHECK(dist_variance(lg) == doctest::Approx(1.0).epsilon(1e-12));
  const ComponentDist st = ComponentDist::student_t_with_variance(0.0, 2.0, 5.0);
  CHECK(dist_variance(st) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("scenario validation on the quality canonical") {
  const Scenario ok = quality_canonical(0.0);
  const ValidationReport report = validate_scenario(ok);
  // a*(1) = 2/3, so the entry bound is 2/9 - 1 < 0 <= R
  CHECK(report.passed("individual-entry"));
  CHECK(report.passed("profitable-market"));
  CHECK(report.passed("log-concavity"));
  CHECK(report.passed("marginal-invariance"));

  const ValidationReport failing = validate_scenario(quality_canonical(-2.0));
  REQUIRE(failing.find("individual-entry") != nullptr);
  CHECK(failing.find("individual-entry")->status == CheckStatus::Fail);

  Scenario bad = quality_canonical(0.0);
  bad.gaussian->var_idio_type = 0.0;
  CHECK_THROWS_AS(validate_scenario(bad), StructuralError);

  Scenario both = quality_canonical(0.0);
  both.general = gaussian_as_general(*both.gaussian);
  CHECK_THROWS_AS(validate_scenario(both), StructuralError);

  Scenario neither = quality_canonical(0.0);
  neither.gaussian.reset();
  CHECK_THROWS_AS(validate_scenario(neither), StructuralError);
}

TEST_CASE("marginal invariance across paired scenarios") {
  CounterStream stream(11, 0);
  for (int i = 0; i < 32; ++i) {
    const ScenarioPair pair = random_gaussian_pair(stream);
    CHECK(pair.quality.type_variance() == pair.circumstance.type_variance());
    CHECK(pair.quality.shock_variance() == pair.circumstance.shock_variance());
  }
}

TEST_CASE("scenario json round trip") {
  const Scenario s = circumstance_canonical(-0.76, 4);
  const nlohmann::json j = scenario_to_json(s);
  CHECK(j.at("kind") == "circumstance");
  CHECK(j.at("gaussian").at("var_common_shock") == 0.5);
  const Scenario back = scenario_from_json(j);
  CHECK(back.kind == s.kind);
  CHECK(back.reward == s.reward);
  CHECK(back.population == s.population);
  CHECK(back.gaussian->var_idio_type == s.gaussian->var_idio_type);

  Scenario gen = s;
  gen.gaussian.reset();
  gen.general = GeneralParams{
      ComponentDist::logistic_with_variance(1.0, 1.0),
      ComponentDist::logistic_with_variance(0.0, 1.0),
      ComponentDist::logistic_with_variance(0.0, 0.5),
      ComponentDist::student_t_with_variance(0.0, 0.5, 6.0)};
  const Scenario gen_back = scenario_from_json(scenario_to_json(gen));
  CHECK(gen_back.general->idio_shock.family == DistFamily::StudentT);
  CHECK(gen_back.general->idio_shock.dof == 6.0);
}

TEST_CASE("malformed scenario json is a structural error") {
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse("[1,2]")),
                  StructuralError);
  nlohmann::json j = scenario_to_json(quality_canonical());
  j.erase("cost");
  CHECK_THROWS_AS(scenario_from_json(j), StructuralError);
  j = scenario_to_json(quality_canonical());
  j["kind"] = "mystery";
  CHECK_THROWS_AS(scenario_from_json(j), StructuralError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), StructuralError);
}

TEST_CASE("student-t scenarios are flagged, not rejected") {
  Scenario s = quality_canonical();
  s.gaussian.reset();
  s.general = GeneralParams{
      ComponentDist::student_t_with_variance(1.0, 1.0, 5.0),
      ComponentDist::gaussian_with_variance(0.0, 1.0),
      ComponentDist::gaussian_with_variance(0.0, 0.5),
      ComponentDist::gaussian_with_variance(0.0, 0.5)};
  const ValidationReport report = validate_scenario(s);
  REQUIRE(report.find("log-concavity") != nullptr);
  CHECK(report.find("log-concavity")->status == CheckStatus::Fail);
}
