#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "banditlan/arm_models.hpp"
#include "banditlan/policies.hpp"

namespace banditlan {

struct ExperimentConfig {
  ThetaVector theta;
  std::vector<ArmModel> arms;
  PolicySpec policy;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;

  int arm_count() const { return static_cast<int>(arms.size()); }
};

/// Throws ConfigError unless K > 1, T >= K, every arm fits theta and the
/// policy is valid for K arms.
void validate(const ExperimentConfig& config);

/// One realized run. Arms are 0-based here; CSV output is 1-based.
struct Trajectory {
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<std::int64_t> pull_counts;
  std::vector<double> reward_sums;

  int arm_count() const { return static_cast<int>(pull_counts.size()); }
  std::int64_t horizon() const { return static_cast<std::int64_t>(actions.size()); }
};

inline constexpr std::uint64_t kActionStream = 0;
inline constexpr std::uint64_t kRewardStream = 1;

/// Simulates T rounds. Policy randomness comes from
/// RandomStream(derive_seed(seed, kActionStream)) and rewards from
/// RandomStream(derive_seed(seed, kRewardStream)); only the chosen arm's
/// reward is drawn.
Trajectory run_trajectory(const ExperimentConfig& config);

/// True iff pull_counts and reward_sums match a recount of the history
/// (bit-exact, summing in time order) and the history fits the config.
bool replay_check(const Trajectory& traj, const ExperimentConfig& config);

/// D_{k,t} after the first `rounds` rounds.
std::vector<std::int64_t> pull_counts_at(const Trajectory& traj, std::int64_t rounds);

/// CSV with header "t,action,reward"; t and action are 1-based.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace banditlan
