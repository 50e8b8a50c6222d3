#include "linkage/gaussian_engine.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "linkage/errors.hpp"

namespace linkage {

namespace {

void check_population(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw DomainError("population must be at least 1, got " +
                      std::to_string(n));
  }
}

double single_agent_mv(const GaussianParams& p) {
  const double vt = p.type_variance();
  const double ve = p.shock_variance();
  return vt / (vt + ve);
}

}  // namespace

double mv_closed_quality(const GaussianParams& p, double n) {
  check_population(n);
  if (n == 1.0) return single_agent_mv(p);
  const double vct = p.var_common_type;
  const double vit = p.var_idio_type;
  const double ve = p.shock_variance();
  const double hat = vct * (vit + ve) / ((n - 1.0) * vct + vit + ve);
  return (hat + vit) / (hat + vit + ve);
}

double mv_closed_circumstance(const GaussianParams& p, double n) {
  check_population(n);
  if (n == 1.0) return single_agent_mv(p);
  const double vt = p.type_variance();
  const double vcs = p.var_common_shock;
  const double vis = p.var_idio_shock;
  const double hat = vcs * (vis + vt) / ((n - 1.0) * vcs + vis + vt);
  return vt / (vt + hat + vis);
}

double mv_quality_limit(const GaussianParams& p) {
  return p.var_idio_type / (p.var_idio_type + p.shock_variance());
}

double mv_circumstance_limit(const GaussianParams& p) {
  return p.type_variance() / (p.type_variance() + p.var_idio_shock);
}

Eigen::VectorXd projection_coefficients(const ProjectionProblem& problem) {
  const Eigen::Index n = problem.cov_signals.rows();
  if (problem.cov_signals.cols() != n || problem.cov_target_signals.size() != n ||
      problem.mean_signals.size() != n) {
    throw StructuralError("projection problem dimensions are inconsistent");
  }
  if (!problem.cov_signals.isApprox(problem.cov_signals.transpose(), 1e-12)) {
    throw StructuralError("signal covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(problem.cov_signals,
                                                     Eigen::EigenvaluesOnly);
  const double scale = problem.cov_signals.trace();
  if (eig.eigenvalues().minCoeff() <= 1e-12 * scale) {
    throw IllConditionedError(
        "signal covariance is singular at the working tolerance");
  }
  return problem.cov_signals.ldlt().solve(problem.cov_target_signals);
}

double mv_projection(const ProjectionProblem& problem,
                     Eigen::Index target_signal_index) {
  if (target_signal_index < 0 ||
      target_signal_index >= problem.cov_signals.rows()) {
    throw StructuralError("target signal index out of range");
  }
  return projection_coefficients(problem)[target_signal_index];
}

ProjectionProblem single_linkage_problem(const Scenario& s, std::int64_t n,
                                         double conjectured_action) {
  require_structure(s);
  if (!s.is_gaussian()) {
    throw StructuralError("projection problems require Gaussian parameters");
  }
  check_population(double(n));
  const GaussianParams& p = *s.gaussian;
  const double vt = p.type_variance();
  const double ve = p.shock_variance();

  ProjectionProblem problem;
  problem.mean_target = p.mu;
  problem.mean_signals = Eigen::VectorXd::Constant(n, p.mu + conjectured_action);
  problem.cov_signals = Eigen::MatrixXd::Zero(n, n);
  problem.cov_target_signals = Eigen::VectorXd::Zero(n);

  double off_diag = 0.0;
  switch (s.kind) {
    case LinkageKind::Quality:
      off_diag = p.var_common_type;
      break;
    case LinkageKind::Circumstance:
      off_diag = p.var_common_shock;
      break;
    case LinkageKind::NoLinkage:
      off_diag = 0.0;
      break;
  }
  problem.cov_signals.setConstant(off_diag);
  problem.cov_signals.diagonal().setConstant(vt + ve);
  problem.cov_target_signals.setConstant(
      s.kind == LinkageKind::Quality ? p.var_common_type : 0.0);
  problem.cov_target_signals[0] = vt;
  if (s.kind == LinkageKind::NoLinkage) {
    // Benchmark principal: only the agent's own outcome enters.
    problem.cov_target_signals.tail(n - 1).setZero();
  }
  return problem;
}

void check_multilink(const MultiLinkSpec& spec) {
  if (spec.segments.empty()) {
    throw StructuralError("multilink spec needs at least one segment");
  }
  if (spec.observed_m < 0 ||
      spec.observed_m > std::int64_t(spec.segments.size())) {
    throw StructuralError("observed_m must lie in [0, segment count]");
  }
  if (!(spec.agent0_var_idio_type > 0.0) ||
      !(spec.agent0_var_idio_shock > 0.0)) {
    throw StructuralError("agent-0 idiosyncratic variances must be positive");
  }
  for (const SegmentSpec& seg : spec.segments) {
    if (!(seg.var_common >= 0.0)) {
      throw StructuralError("segment common variance must be nonnegative");
    }
    if (seg.segment_size < 1) {
      throw StructuralError("segment size must be at least 1");
    }
    if (!(seg.var_idio_type > 0.0) || !(seg.var_idio_shock > 0.0)) {
      throw StructuralError("segment idiosyncratic variances must be positive");
    }
  }
}

ProjectionProblem multilink_problem(const MultiLinkSpec& spec,
                                    LinkageKind kind) {
  check_multilink(spec);
  if (kind == LinkageKind::NoLinkage) {
    throw DomainError("multilink problems are for quality or circumstance");
  }
  const bool quality = (kind == LinkageKind::Quality);

  // Signals: agent 0's outcome followed by the outcomes of every agent in
  // each observed segment. Outcomes of unobserved segments carry no
  // information under the principal's belief (their common component is
  // treated as idiosyncratic to agent 0) and are dropped.
  double total_common = 0.0;
  for (const SegmentSpec& seg : spec.segments) total_common += seg.var_common;

  std::int64_t dim = 1;
  for (std::int64_t j = 0; j < spec.observed_m; ++j) {
    dim += spec.segments[size_t(j)].segment_size;
  }

  const double var_s0 = total_common + spec.agent0_var_idio_type +
                        spec.agent0_var_idio_shock;
  // theta_0 is the full type of agent 0: with a quality decomposition it sums
  // every segment's common component plus the personal component; under
  // circumstance the common components sit in the shock instead.
  const double cov_theta0_s0 =
      quality ? total_common + spec.agent0_var_idio_type
              : spec.agent0_var_idio_type;

  ProjectionProblem problem;
  problem.cov_signals = Eigen::MatrixXd::Zero(dim, dim);
  problem.cov_target_signals = Eigen::VectorXd::Zero(dim);
  problem.mean_signals = Eigen::VectorXd::Zero(dim);
  problem.mean_target = 0.0;

  problem.cov_signals(0, 0) = var_s0;
  problem.cov_target_signals[0] = cov_theta0_s0;

  std::int64_t offset = 1;
  for (std::int64_t j = 0; j < spec.observed_m; ++j) {
    const SegmentSpec& seg = spec.segments[size_t(j)];
    const double var_member =
        seg.var_common + seg.var_idio_type + seg.var_idio_shock;
    for (std::int64_t i = 0; i < seg.segment_size; ++i) {
      const std::int64_t row = offset + i;
      problem.cov_signals(row, row) = var_member;
      problem.cov_signals(row, 0) = seg.var_common;
      problem.cov_signals(0, row) = seg.var_common;
      for (std::int64_t k = 0; k < i; ++k) {
        problem.cov_signals(row, offset + k) = seg.var_common;
        problem.cov_signals(offset + k, row) = seg.var_common;
      }
      problem.cov_target_signals[row] = quality ? seg.var_common : 0.0;
    }
    offset += seg.segment_size;
  }
  return problem;
}

double mv_multilink(const MultiLinkSpec& spec, LinkageKind kind) {
  return mv_projection(multilink_problem(spec, kind), 0);
}

ProjectionProblem mixed_multilink_problem(const MixedLinkSpec& spec) {
  MultiLinkSpec shape;
  shape.observed_m = spec.observed_m;
  shape.agent0_var_idio_type = spec.agent0_var_idio_type;
  shape.agent0_var_idio_shock = spec.agent0_var_idio_shock;
  for (const MixedSegment& seg : spec.segments) {
    if (seg.kind == LinkageKind::NoLinkage) {
      throw StructuralError("mixed multilink segments must carry a linkage");
    }
    shape.segments.push_back(seg.segment);
  }
  check_multilink(shape);

  double total_common = 0.0;
  double common_type_part = 0.0;
  for (const MixedSegment& seg : spec.segments) {
    total_common += seg.segment.var_common;
    if (seg.kind == LinkageKind::Quality) {
      common_type_part += seg.segment.var_common;
    }
  }

  std::int64_t dim = 1;
  for (std::int64_t j = 0; j < spec.observed_m; ++j) {
    dim += spec.segments[size_t(j)].segment.segment_size;
  }

  ProjectionProblem problem;
  problem.cov_signals = Eigen::MatrixXd::Zero(dim, dim);
  problem.cov_target_signals = Eigen::VectorXd::Zero(dim);
  problem.mean_signals = Eigen::VectorXd::Zero(dim);
  problem.mean_target = 0.0;
  problem.cov_signals(0, 0) =
      total_common + spec.agent0_var_idio_type + spec.agent0_var_idio_shock;
  problem.cov_target_signals[0] = common_type_part + spec.agent0_var_idio_type;

  std::int64_t offset = 1;
  for (std::int64_t j = 0; j < spec.observed_m; ++j) {
    const MixedSegment& seg = spec.segments[size_t(j)];
    const double vc = seg.segment.var_common;
    const double var_member =
        vc + seg.segment.var_idio_type + seg.segment.var_idio_shock;
    for (std::int64_t i = 0; i < seg.segment.segment_size; ++i) {
      const std::int64_t row = offset + i;
      problem.cov_signals(row, row) = var_member;
      problem.cov_signals(row, 0) = vc;
      problem.cov_signals(0, row) = vc;
      for (std::int64_t k = 0; k < i; ++k) {
        problem.cov_signals(row, offset + k) = vc;
        problem.cov_signals(offset + k, row) = vc;
      }
      problem.cov_target_signals[row] =
          seg.kind == LinkageKind::Quality ? vc : 0.0;
    }
    offset += seg.segment.segment_size;
  }
  return problem;
}

double mv_mixed_multilink(const MixedLinkSpec& spec) {
  return mv_projection(mixed_multilink_problem(spec), 0);
}

GaussianPosterior::GaussianPosterior(const Scenario& s, std::int64_t n,
                                     std::int64_t agent,
                                     double conjectured_action) {
  if (agent < 0 || agent >= n) {
    throw StructuralError("agent index out of range");
  }
  ProjectionProblem problem = single_linkage_problem(s, n, conjectured_action);
  if (agent != 0) {
    // Agents are exchangeable, so retargeting only swaps two entries of the
    // target covariance vector.
    std::swap(problem.cov_target_signals[0], problem.cov_target_signals[agent]);
  }
  beta_ = projection_coefficients(problem);
  mean_target_ = problem.mean_target;
  mean_signals_ = problem.mean_signals;
}

double GaussianPosterior::operator()(const Eigen::VectorXd& signals) const {
  return mean_target_ + beta_.dot(signals - mean_signals_);
}

}  // namespace linkage
