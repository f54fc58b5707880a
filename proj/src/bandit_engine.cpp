#include "banditlan/bandit_engine.hpp"

#include <string>

#include "banditlan/csv.hpp"
#include "banditlan/errors.hpp"

namespace banditlan {

void validate(const ExperimentConfig& config) {
  const int k = config.arm_count();
  if (k < 2) throw ConfigError("a bandit needs at least two arms");
  if (config.horizon < k) throw ConfigError("horizon T must be at least the number of arms");
  for (const auto& arm : config.arms) check_compatible(arm, config.theta);
  validate_policy(config.policy, k);
}

Trajectory run_trajectory(const ExperimentConfig& config) {
  validate(config);
  const auto horizon = static_cast<std::size_t>(config.horizon);
  RandomStream action_rng(derive_seed(config.seed, kActionStream));
  RandomStream reward_rng(derive_seed(config.seed, kRewardStream));
  PolicyState state(config.arm_count());

  Trajectory traj;
  traj.actions.reserve(horizon);
  traj.rewards.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const int arm = draw_action(state, config.policy, action_rng);
    const double reward = sample(config.arms[static_cast<std::size_t>(arm)], config.theta, reward_rng);
    state.update(arm, reward);
    traj.actions.push_back(arm);
    traj.rewards.push_back(reward);
  }
  traj.pull_counts.assign(state.counts().begin(), state.counts().end());
  traj.reward_sums.assign(state.sums().begin(), state.sums().end());
  return traj;
}

bool replay_check(const Trajectory& traj, const ExperimentConfig& config) {
  const auto k = static_cast<std::size_t>(config.arm_count());
  if (traj.pull_counts.size() != k || traj.reward_sums.size() != k) return false;
  if (traj.actions.size() != traj.rewards.size()) return false;
  if (traj.horizon() != config.horizon) return false;
  std::vector<std::int64_t> counts(k, 0);
  std::vector<double> sums(k, 0.0);
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    const int a = traj.actions[t];
    if (a < 0 || static_cast<std::size_t>(a) >= k) return false;
    ++counts[static_cast<std::size_t>(a)];
    sums[static_cast<std::size_t>(a)] += traj.rewards[t];
  }
  return counts == traj.pull_counts && sums == traj.reward_sums;
}

std::vector<std::int64_t> pull_counts_at(const Trajectory& traj, std::int64_t rounds) {
  if (rounds < 0 || rounds > traj.horizon()) {
    throw ContractViolation("checkpoint outside the trajectory");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(traj.arm_count()), 0);
  for (std::int64_t t = 0; t < rounds; ++t) ++counts[static_cast<std::size_t>(traj.actions[static_cast<std::size_t>(t)])];
  return counts;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,action,reward\n";
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    out << (t + 1) << ',' << (traj.actions[t] + 1) << ',' << format_real(traj.rewards[t]) << '\n';
  }
}

}  // namespace banditlan
