#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "linkage/scenario.hpp"

namespace linkage {

/// Linear projection problem: the joint Gaussian structure of a target latent
/// variable and a signal vector, at conjectured actions.
struct ProjectionProblem {
  Eigen::MatrixXd cov_signals;         // symmetric positive definite
  Eigen::VectorXd cov_target_signals;  // Cov(target, S)
  double mean_target = 0.0;
  Eigen::VectorXd mean_signals;
};

/// Marginal value of effort under a quality linkage, population n (real
/// valued; integer populations are the model, real n serves the
/// deterministic-entry comparison). Uses the standard Bayesian posterior
/// variance of the common type component,
///   sigma_hat^2 = vct * (vit + ve) / ((n-1) vct + vit + ve),
/// then MV = (sigma_hat^2 + vit) / (sigma_hat^2 + vit + ve).
double mv_closed_quality(const GaussianParams& p, double n);

/// Circumstance-linkage counterpart: MV = vt / (vt + sigma_hat_e^2 + vis)
/// with sigma_hat_e^2 = vcs * (vis + vt) / ((n-1) vcs + vis + vt).
double mv_closed_circumstance(const GaussianParams& p, double n);

double mv_quality_limit(const GaussianParams& p);        // vit / (vit + ve)
double mv_circumstance_limit(const GaussianParams& p);   // vt / (vt + vis)

/// Solves cov_signals * beta = cov_target_signals by LDLT after an
/// eigenvalue conditioning check (min eigenvalue vs 1e-12 of trace scale;
/// below that throws IllConditionedError).
Eigen::VectorXd projection_coefficients(const ProjectionProblem& problem);

/// The coefficient on one signal in the posterior mean E[target | S]:
/// exactly the marginal value of effort for the agent behind that signal.
double mv_projection(const ProjectionProblem& problem,
                     Eigen::Index target_signal_index);

/// The standard single-linkage projection problem for agent 0 of N agents at
/// the given conjectured action level (same for all agents).
ProjectionProblem single_linkage_problem(const Scenario& s, std::int64_t n,
                                         double conjectured_action = 0.0);

/// One segment linked to agent 0: a common component shared with
/// segment_size other agents whose own idiosyncratic variances are given.
struct SegmentSpec {
  double var_common = 1.0;       // common type (quality) or shock (circumstance)
  std::int64_t segment_size = 1; // number of linked agents observed, >= 1
  double var_idio_type = 1.0;
  double var_idio_shock = 1.0;
};

/// Agent 0 linked to J segments of which the first observed_m are known to
/// the principal; the rest are treated as idiosyncratic variance.
struct MultiLinkSpec {
  std::vector<SegmentSpec> segments;
  std::int64_t observed_m = 0;
  double agent0_var_idio_type = 1.0;
  double agent0_var_idio_shock = 1.0;
};

void check_multilink(const MultiLinkSpec& spec);

ProjectionProblem multilink_problem(const MultiLinkSpec& spec,
                                    LinkageKind kind);

/// Agent-0 marginal value of effort when the principal observes the first
/// observed_m linkages. Strictly decreasing in observed_m under Quality,
/// strictly increasing under Circumstance.
double mv_multilink(const MultiLinkSpec& spec, LinkageKind kind);

/// Extension: segments of both kinds at once. Quality segments sit in agent
/// 0's type, circumstance segments in the shock; unobserved segments of
/// either kind fold into idiosyncratic variance as before.
struct MixedSegment {
  LinkageKind kind = LinkageKind::Quality;  // Quality or Circumstance
  SegmentSpec segment;
};

struct MixedLinkSpec {
  std::vector<MixedSegment> segments;
  std::int64_t observed_m = 0;
  double agent0_var_idio_type = 1.0;
  double agent0_var_idio_shock = 1.0;
};

ProjectionProblem mixed_multilink_problem(const MixedLinkSpec& spec);
double mv_mixed_multilink(const MixedLinkSpec& spec);

/// Precomputed posterior-mean functional E[theta_agent | S] for a Gaussian
/// scenario: evaluates mean_target + beta . (S - mean_signals).
class GaussianPosterior {
 public:
  GaussianPosterior(const Scenario& s, std::int64_t n, std::int64_t agent,
                    double conjectured_action = 0.0);

  double operator()(const Eigen::VectorXd& signals) const;
  const Eigen::VectorXd& beta() const { return beta_; }

 private:
  Eigen::VectorXd beta_;
  double mean_target_;
  Eigen::VectorXd mean_signals_;
};

}  // namespace linkage
