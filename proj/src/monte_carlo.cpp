#include "banditlan/monte_carlo.hpp"

#include <algorithm>
#include <cmath>

#include "banditlan/errors.hpp"
#include "banditlan/parallel.hpp"

namespace banditlan {

ThetaVector StudyConfig::theta_for(double m1) const {
  const double mu1 =
      gap_scaling == GapScaling::root_horizon ? m1 / std::sqrt(static_cast<double>(horizon)) : m1;
  return base_theta.with_component(arms.front().component(), mu1);
}

ExperimentConfig StudyConfig::experiment(std::size_t cell, std::int64_t rep) const {
  return ExperimentConfig{theta_for(m1_grid.at(cell)), arms, policy, horizon,
                          derive_seed(derive_seed(base_seed, cell), static_cast<std::uint64_t>(rep))};
}

void validate(const StudyConfig& config) {
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (config.m1_grid.empty()) throw ConfigError("the m1 grid must not be empty");
  if (config.arms.empty()) throw ConfigError("a bandit needs at least two arms");
  for (std::size_t cell = 0; cell < config.m1_grid.size(); ++cell) {
    if (!std::isfinite(config.m1_grid[cell])) throw ConfigError("m1 values must be finite");
    validate(config.experiment(cell, 0));
  }
  if (config.h && config.h->size() != config.base_theta.size()) {
    throw ConfigError("h must have one entry per theta component");
  }
  if (config.rate_constants &&
      static_cast<int>(config.rate_constants->size()) != config.arm_count()) {
    throw ConfigError("one pull-rate constant per arm is required");
  }
}

std::optional<double> t_stat_arm(const Trajectory& traj, int arm, double mu) {
  const auto d = traj.pull_counts.at(static_cast<std::size_t>(arm));
  if (d == 0) return std::nullopt;
  const auto dd = static_cast<double>(d);
  return (traj.reward_sums[static_cast<std::size_t>(arm)] / dd - mu) / std::sqrt(1.0 / dd);
}

std::optional<double> t_stat_diff(const Trajectory& traj, double delta) {
  if (traj.arm_count() != 2) throw ConfigError("the difference t-statistic needs K = 2");
  const auto d1 = traj.pull_counts[0];
  const auto d2 = traj.pull_counts[1];
  if (d1 == 0 || d2 == 0) return std::nullopt;
  const auto n1 = static_cast<double>(d1);
  const auto n2 = static_cast<double>(d2);
  return (traj.reward_sums[0] / n1 - traj.reward_sums[1] / n2 - delta) / std::sqrt(1.0 / n1 + 1.0 / n2);
}

ReplicationRecord make_record(const StudyConfig& config, std::size_t cell, std::int64_t rep,
                              const Trajectory& traj) {
  const ThetaVector theta = config.theta_for(config.m1_grid.at(cell));
  ReplicationRecord rec;
  rec.cell = cell;
  rec.rep = rep;
  rec.m1 = config.m1_grid[cell];
  rec.pulls = traj.pull_counts;
  for (int k = 0; k < config.arm_count(); ++k) {
    rec.tau_mu.push_back(t_stat_arm(traj, k, mean(config.arms[static_cast<std::size_t>(k)], theta)));
  }
  if (config.arm_count() == 2) {
    const double delta = mean(config.arms[0], theta) - mean(config.arms[1], theta);
    rec.tau_delta = t_stat_diff(traj, delta);
  }
  if (config.h) {
    std::optional<std::span<const double>> constants;
    if (config.rate_constants) constants = std::span<const double>(*config.rate_constants);
    const auto report = expand(traj, theta, config.arms, *config.h, config.regime, constants);
    rec.exact_llr = report.exact_llr;
    rec.quad_llr = report.quad_llr;
    rec.residual = report.residual;
  }
  return rec;
}

std::vector<ReplicationRecord> run_study(const StudyConfig& config) {
  validate(config);
  const auto reps = static_cast<std::size_t>(config.replications);
  const std::size_t total = config.m1_grid.size() * reps;
  std::vector<ReplicationRecord> records(total);
  parallel_for(total, config.threads, [&](std::size_t i) {
    const std::size_t cell = i / reps;
    const auto rep = static_cast<std::int64_t>(i % reps);
    const Trajectory traj = run_trajectory(config.experiment(cell, rep));
    records[i] = make_record(config, cell, rep, traj);
  });
  return records;
}

std::vector<CellSummary> summarize(const StudyConfig& config,
                                   const std::vector<ReplicationRecord>& records) {
  const auto k = static_cast<std::size_t>(config.arm_count());
  std::vector<CellSummary> out;
  for (std::size_t cell = 0; cell < config.m1_grid.size(); ++cell) {
    CellSummary s;
    s.cell = cell;
    s.m1 = config.m1_grid[cell];
    std::vector<std::vector<std::optional<double>>> tau_mu(k);
    std::vector<std::optional<double>> tau_delta;
    std::vector<double> d2;
    for (const auto& r : records) {
      if (r.cell != cell) continue;
      ++s.n_reps;
      for (std::size_t i = 0; i < k; ++i) tau_mu[i].push_back(r.tau_mu[i]);
      tau_delta.push_back(r.tau_delta);
      d2.push_back(static_cast<double>(r.pulls[1]));
      if (std::any_of(r.pulls.begin(), r.pulls.end(), [](auto d) { return d == 0; })) ++s.n_missing;
    }
    if (s.n_reps == 0) continue;
    auto ks_or_missing = [](const std::vector<std::optional<double>>& xs) -> std::optional<double> {
      if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.has_value(); })) {
        return std::nullopt;
      }
      return ks_distance(xs).distance;
    };
    for (std::size_t i = 0; i < k; ++i) s.ks_tau_mu.push_back(ks_or_missing(tau_mu[i]));
    s.ks_tau_delta = ks_or_missing(tau_delta);
    s.median_d2 = quantile(d2, 0.5);
    s.q25_d2 = quantile(d2, 0.25);
    s.q75_d2 = quantile(d2, 0.75);
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<double> reference_rate_constant(const StudyConfig& config, const ThetaVector& theta,
                                              int arm) {
  if (config.regime == RateRegime::linear) {
    if (const auto* rct = config.policy.get_if<Rct>()) return rct->weights.at(static_cast<std::size_t>(arm));
    return std::nullopt;
  }
  const auto& arms = config.arms;
  const double sigma2 = arms.front().variance();
  const bool gaussian = std::all_of(arms.begin(), arms.end(), [&](const ArmModel& a) {
    return a.family() == ArmFamily::gaussian && a.variance() == sigma2;
  });
  if (!gaussian) return std::nullopt;
  bool well_specified = false;
  if (const auto* t = config.policy.get_if<ThompsonGaussian>()) well_specified = t->assumed_var == sigma2;
  if (config.policy.get_if<Ucb1>()) well_specified = sigma2 == 1.0;
  if (!well_specified) return std::nullopt;
  const int best = optimal_arm(theta, arms);
  if (arm == best) return std::nullopt;
  const double gap = mean(arms[static_cast<std::size_t>(best)], theta) -
                     mean(arms[static_cast<std::size_t>(arm)], theta);
  return 2.0 * sigma2 / (gap * gap);
}

std::vector<ConvergenceRow> convergence_diag(const StudyConfig& config,
                                             const std::vector<std::int64_t>& checkpoints) {
  validate(config);
  if (checkpoints.empty()) throw ConfigError("convergence needs at least one checkpoint");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 2 || checkpoints[i] > config.horizon ||
        (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw ConfigError("checkpoints must increase and lie in [2, T]");
    }
  }
  const auto reps = static_cast<std::size_t>(config.replications);
  const auto k = static_cast<std::size_t>(config.arm_count());
  const bool linear = config.regime == RateRegime::linear;

  std::vector<ConvergenceRow> rows;
  for (std::size_t cell = 0; cell < config.m1_grid.size(); ++cell) {
    const ThetaVector theta = config.theta_for(config.m1_grid[cell]);
    // counts[rep][checkpoint][arm]
    std::vector<std::vector<std::vector<std::int64_t>>> counts(reps);
    parallel_for(reps, config.threads, [&](std::size_t rep) {
      const Trajectory traj = run_trajectory(config.experiment(cell, static_cast<std::int64_t>(rep)));
      std::vector<std::int64_t> running(k, 0);
      std::size_t next = 0;
      for (std::int64_t t = 0; t < traj.horizon() && next < checkpoints.size(); ++t) {
        ++running[static_cast<std::size_t>(traj.actions[static_cast<std::size_t>(t)])];
        if (t + 1 == checkpoints[next]) {
          counts[rep].push_back(running);
          ++next;
        }
      }
    });
    const int best = linear ? -1 : optimal_arm(theta, config.arms);
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const auto tc = static_cast<double>(checkpoints[c]);
      const double scale = linear ? tc : std::log(tc);
      for (std::size_t arm = 0; arm < k; ++arm) {
        if (static_cast<int>(arm) == best) continue;
        std::vector<double> values(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) {
          values[rep] = static_cast<double>(counts[rep][c][arm]) / scale;
        }
        ConvergenceRow row;
        row.m1 = config.m1_grid[cell];
        row.checkpoint = checkpoints[c];
        row.arm = static_cast<int>(arm);
        row.statistic = linear ? "D/T" : "D/logT";
        row.median = quantile(values, 0.5);
        row.q25 = quantile(values, 0.25);
        row.q75 = quantile(values, 0.75);
        row.reference = reference_rate_constant(config, theta, static_cast<int>(arm));
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace banditlan
