#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banditlan/arm_models.hpp"
#include "banditlan/bandit_engine.hpp"
#include "banditlan/lan_diagnostics.hpp"
#include "banditlan/policies.hpp"
#include "banditlan/stats.hpp"

namespace banditlan {

/// How a grid value m1 becomes the first arm's mean.
enum class GapScaling {
  root_horizon,  // mu_1 = m1 / sqrt(T)
  none,          // mu_1 = m1
};

struct StudyConfig {
  ThetaVector base_theta;
  std::vector<ArmModel> arms;
  PolicySpec policy;
  std::int64_t horizon = 500;
  std::int64_t replications = 10000;
  std::uint64_t base_seed = 1;
  std::vector<double> m1_grid{};
  GapScaling gap_scaling = GapScaling::root_horizon;
  std::optional<Eigen::VectorXd> h{};
  RateRegime regime = RateRegime::logarithmic;
  std::optional<std::vector<double>> rate_constants{};
  int threads = 1;

  int arm_count() const { return static_cast<int>(arms.size()); }
  /// base_theta with the first arm's component set from m1.
  ThetaVector theta_for(double m1) const;
  /// Config of replication `rep` in grid cell `cell`, seeded with
  /// derive_seed(derive_seed(base_seed, cell), rep).
  ExperimentConfig experiment(std::size_t cell, std::int64_t rep) const;
};

/// Throws ConfigError on replications < 1, an empty grid or an invalid
/// experiment.
void validate(const StudyConfig& config);

struct ReplicationRecord {
  std::size_t cell = 0;
  std::int64_t rep = 0;
  double m1 = 0.0;
  std::vector<std::int64_t> pulls;
  std::vector<std::optional<double>> tau_mu;
  std::optional<double> tau_delta;
  std::optional<double> exact_llr;
  std::optional<double> quad_llr;
  std::optional<double> residual;
};

/// (R_k / D_k - mu_k) / sqrt(1 / D_k); missing when D_k = 0.
std::optional<double> t_stat_arm(const Trajectory& traj, int arm, double mu);

/// (R_1/D_1 - R_2/D_2 - delta) / sqrt(1/D_1 + 1/D_2); missing when either
/// count is 0. Throws ConfigError unless K = 2.
std::optional<double> t_stat_diff(const Trajectory& traj, double delta);

/// Statistics of one finished trajectory of `config` at grid value m1.
ReplicationRecord make_record(const StudyConfig& config, std::size_t cell, std::int64_t rep,
                              const Trajectory& traj);

/// One record per (cell, rep), ordered by cell then rep regardless of the
/// number of worker threads.
std::vector<ReplicationRecord> run_study(const StudyConfig& config);

struct CellSummary {
  std::size_t cell = 0;
  double m1 = 0.0;
  std::int64_t n_reps = 0;
  std::vector<std::optional<double>> ks_tau_mu;
  std::optional<double> ks_tau_delta;
  /// Replications where at least one arm was never pulled.
  std::int64_t n_missing = 0;
  double median_d2 = 0.0;
  double q25_d2 = 0.0;
  double q75_d2 = 0.0;
};

std::vector<CellSummary> summarize(const StudyConfig& config,
                                   const std::vector<ReplicationRecord>& records);

struct ConvergenceRow {
  double m1 = 0.0;
  std::int64_t checkpoint = 0;
  int arm = 0;
  /// "D/logT" under the logarithmic regime, "D/T" under the linear one.
  std::string statistic;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::optional<double> reference;
};

/// Reference limit of the pull-rate statistic for `arm`, when known:
/// 2 sigma^2 / gap^2 for well-specified Gaussian Thompson (or UCB1 with unit
/// variance) under the logarithmic regime, the weight for Rct under the
/// linear one.
std::optional<double> reference_rate_constant(const StudyConfig& config, const ThetaVector& theta,
                                              int arm);

/// Distribution of D_{k,T'}/log T' (or D_{k,T'}/T') over replications for each
/// checkpoint T' and each arm that is suboptimal (every arm under the linear
/// regime). Checkpoints must increase, lie in [2, T].
std::vector<ConvergenceRow> convergence_diag(const StudyConfig& config,
                                             const std::vector<std::int64_t>& checkpoints);

}  // namespace banditlan
