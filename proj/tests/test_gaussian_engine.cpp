#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linkage/gaussian_engine.hpp"
#include "linkage/mv.hpp"
#include "test_helpers.hpp"

using namespace linkage;
using namespace linkage::testing;

namespace {

MultiLinkSpec two_segment_spec() {
  // Worked example: two segments, each common variance 0.5 with one linked
  // agent of unit idiosyncratic variances; agent 0 idiosyncratic variances 1.
  MultiLinkSpec spec;
  spec.segments = {SegmentSpec{0.5, 1, 1.0, 1.0}, SegmentSpec{0.5, 1, 1.0, 1.0}};
  spec.agent0_var_idio_type = 1.0;
  spec.agent0_var_idio_shock = 1.0;
  return spec;
}

MultiLinkSpec random_multilink(CounterStream& stream, int max_segments) {
  auto log_uniform = [&](double lo, double hi) {
    return lo * std::exp(stream.next_uniform() * std::log(hi / lo));
  };
  MultiLinkSpec spec;
  const int j = 1 + int(stream.next_uniform() * max_segments);
  for (int k = 0; k < j; ++k) {
    SegmentSpec seg;
    seg.var_common = log_uniform(0.1, 10.0);
    seg.segment_size = 1 + std::int64_t(stream.next_uniform() * 4.0);
    seg.var_idio_type = log_uniform(0.1, 10.0);
    seg.var_idio_shock = log_uniform(0.1, 10.0);
    spec.segments.push_back(seg);
  }
  spec.agent0_var_idio_type = log_uniform(0.1, 10.0);
  spec.agent0_var_idio_shock = log_uniform(0.1, 10.0);
  return spec;
}

}  // namespace

TEST_CASE("quality closed form on the canonical parameters") {
  const GaussianParams p = *quality_canonical().gaussian;
  CHECK(mv_closed_quality(p, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // hand formula (N+3)/(2N+4) for unit variances
  CHECK(mv_closed_quality(p, 2) == doctest::Approx(0.625).epsilon(1e-14));
  for (int n = 1; n <= 30; ++n) {
    CHECK(mv_closed_quality(p, n) ==
          doctest::Approx((n + 3.0) / (2.0 * n + 4.0)).epsilon(1e-13));
  }
  // limit sigma_it^2 / (sigma_it^2 + sigma_e^2) = 1/2
  CHECK(std::fabs(mv_closed_quality(p, 1e6) - 0.5) < 1e-5);
  CHECK(mv_quality_limit(p) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mv_closed_quality(p, 0), DomainError);
}

TEST_CASE("circumstance closed form on the canonical parameters") {
  const GaussianParams p = *circumstance_canonical().gaussian;
  CHECK(mv_closed_circumstance(p, 1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(mv_closed_circumstance(p, 3) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(mv_closed_circumstance(p, 2) ==
        doctest::Approx(24.0 / 35.0).epsilon(1e-14));
  CHECK(mv_closed_circumstance(p, 4) ==
        doctest::Approx(32.0 / 45.0).epsilon(1e-14));
  CHECK(std::fabs(mv_closed_circumstance(p, 1e6) - 0.8) < 1e-5);
  CHECK(mv_circumstance_limit(p) == doctest::Approx(0.8));
}

TEST_CASE("scalar projection") {
  ProjectionProblem problem;
  problem.cov_signals = Eigen::MatrixXd::Constant(1, 1, 3.0);
  problem.cov_target_signals = Eigen::VectorXd::Constant(1, 2.0);
  problem.mean_signals = Eigen::VectorXd::Zero(1);
  CHECK(mv_projection(problem, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("ill-conditioned covariance is rejected") {
  ProjectionProblem problem;
  problem.cov_signals = Eigen::MatrixXd::Constant(2, 2, 1.0);  // rank one
  problem.cov_target_signals = Eigen::VectorXd::Ones(2);
  problem.mean_signals = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(projection_coefficients(problem), IllConditionedError);
}

TEST_CASE("closed forms agree with the projection engine") {
  CounterStream stream(2024, 0);
  double worst = 0.0;
  for (int draw = 0; draw < 60; ++draw) {
    const ScenarioPair pair = random_gaussian_pair(stream);
    for (std::int64_t n : {1, 2, 3, 5, 17, 50}) {
      const double q_closed = mv_closed_quality(*pair.quality.gaussian, double(n));
      const double q_proj =
          mv_projection(single_linkage_problem(pair.quality, n), 0);
      worst = std::max(worst, std::fabs(q_closed - q_proj));
      const double c_closed =
          mv_closed_circumstance(*pair.circumstance.gaussian, double(n));
      const double c_proj =
          mv_projection(single_linkage_problem(pair.circumstance, n), 0);
      worst = std::max(worst, std::fabs(c_closed - c_proj));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("population monotonicity and limit rate") {
  CounterStream stream(5150, 0);
  for (int draw = 0; draw < 40; ++draw) {
    const ScenarioPair pair = random_gaussian_pair(stream);
    const GaussianParams& p = *pair.quality.gaussian;
    double prev_q = mv_closed_quality(p, 1);
    double prev_c = mv_closed_circumstance(p, 1);
    const double lim_q = mv_quality_limit(p);
    const double lim_c = mv_circumstance_limit(p);
    CHECK(prev_q == prev_c);  // equal start, bitwise
    for (int n = 2; n <= 50; ++n) {
      const double q = mv_closed_quality(p, n);
      const double c = mv_closed_circumstance(p, n);
      CHECK(prev_q - q > 1e-12);
      CHECK(c - prev_c > 1e-12);
      // values pinched between the limit and the single-agent value
      CHECK(q >= lim_q - 1e-12);
      CHECK(c <= lim_c + 1e-12);
      CHECK(q < 1.0);
      CHECK(c < 1.0);
      CHECK(q > 0.0);
      // |MV(N) - limit| <= 2/N (derived from the posterior-variance decay)
      CHECK(std::fabs(q - lim_q) <= 2.0 / n);
      CHECK(std::fabs(c - lim_c) <= 2.0 / n);
      prev_q = q;
      prev_c = c;
    }
  }
}

TEST_CASE("two-segment multilink worked example") {
  MultiLinkSpec spec = two_segment_spec();
  spec.observed_m = 0;
  CHECK(mv_multilink(spec, LinkageKind::Quality) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  spec.observed_m = 1;
  // solve [[3, .5], [.5, 2.5]] beta = [2, .5] by hand: beta0 = 4.75/7.25
  CHECK(mv_multilink(spec, LinkageKind::Quality) ==
        doctest::Approx(4.75 / 7.25).epsilon(1e-12));
  spec.observed_m = 2;
  // symmetric 3x3 solve: beta0 = 1.8/2.8
  CHECK(mv_multilink(spec, LinkageKind::Quality) ==
        doctest::Approx(1.8 / 2.8).epsilon(1e-12));
}

TEST_CASE("multilink monotone in the number of observed segments") {
  CounterStream stream(99, 0);
  for (int draw = 0; draw < 50; ++draw) {
    MultiLinkSpec spec = random_multilink(stream, 5);
    std::vector<double> q, c;
    for (std::int64_t m = 0; m <= std::int64_t(spec.segments.size()); ++m) {
      spec.observed_m = m;
      q.push_back(mv_multilink(spec, LinkageKind::Quality));
      c.push_back(mv_multilink(spec, LinkageKind::Circumstance));
    }
    for (size_t m = 1; m < q.size(); ++m) {
      CHECK(q[m] < q[m - 1] - 1e-12);
      CHECK(c[m] > c[m - 1] + 1e-12);
    }
  }
}

TEST_CASE("mixed-kind segments pull the coefficient in opposite directions") {
  CounterStream stream(171, 0);
  for (int draw = 0; draw < 25; ++draw) {
    MixedLinkSpec spec;
    const int j = 1 + int(stream.next_uniform() * 3.0);
    for (int k = 0; k < j; ++k) {
      const bool quality = stream.next_uniform() < 0.5;
      spec.segments.push_back(MixedSegment{
          quality ? LinkageKind::Quality : LinkageKind::Circumstance,
          SegmentSpec{0.2 + 2.0 * stream.next_uniform(),
                      1 + std::int64_t(stream.next_uniform() * 3.0),
                      0.5 + stream.next_uniform(), 0.5 + stream.next_uniform()}});
    }
    spec.agent0_var_idio_type = 0.5 + stream.next_uniform();
    spec.agent0_var_idio_shock = 0.5 + stream.next_uniform();
    for (std::int64_t m = 0; m < j; ++m) {
      spec.observed_m = m;
      const double before = mv_mixed_multilink(spec);
      spec.observed_m = m + 1;
      const double after = mv_mixed_multilink(spec);
      if (spec.segments[size_t(m)].kind == LinkageKind::Quality) {
        CHECK(after < before - 1e-12);
      } else {
        CHECK(after > before + 1e-12);
      }
    }
  }
}

TEST_CASE("gaussian posterior functional matches the projection slope") {
  const Scenario s = quality_canonical(0.0, 3);
  const GaussianPosterior posterior(s, 3, 0, 0.4);
  Eigen::VectorXd base = Eigen::VectorXd::Constant(3, 1.4);
  const double at_mean = posterior(base);
  CHECK(at_mean == doctest::Approx(1.0).epsilon(1e-12));  // prior mean
  Eigen::VectorXd bumped = base;
  bumped[0] += 1.0;
  const double slope = posterior(bumped) - at_mean;
  CHECK(slope == doctest::Approx(mv_closed_quality(*s.gaussian, 3)).epsilon(1e-12));
}
