#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "banditlan/bandit_engine.hpp"
#include "banditlan/errors.hpp"
#include "banditlan/stats.hpp"

using namespace banditlan;

namespace {

ExperimentConfig two_arm(PolicySpec policy, ArmFamily family, double mu1, std::int64_t horizon,
                         std::uint64_t seed) {
  return ExperimentConfig{ThetaVector{mu1, 0.0}, location_model(family, 2), std::move(policy), horizon,
                          seed};
}

double logistic_cdf(double x) { return 1.0 / (1.0 + std::exp(-x / kLogisticScale)); }

}  // namespace

TEST(BanditEngine, DegenerateRctPullsFirstArmOnly) {
  const auto traj = run_trajectory(two_arm(Rct{{1.0, 0.0}}, ArmFamily::gaussian, 0.0, 100, 1));
  EXPECT_TRUE(std::ranges::all_of(traj.actions, [](int a) { return a == 0; }));
  EXPECT_EQ(traj.pull_counts, (std::vector<std::int64_t>{100, 0}));
}

TEST(BanditEngine, SameSeedSameTrajectory) {
  for (const PolicySpec& p : {PolicySpec(ThompsonGaussian{}), PolicySpec(Ucb1{}), PolicySpec(Rct{{0.3, 0.7}})}) {
    const auto cfg = two_arm(p, ArmFamily::logistic_unit_var, 0.2, 300, 77);
    const auto a = run_trajectory(cfg);
    const auto b = run_trajectory(cfg);
    EXPECT_EQ(a.actions, b.actions);
    EXPECT_EQ(a.rewards, b.rewards);
    EXPECT_EQ(a.reward_sums, b.reward_sums);
  }
}

TEST(BanditEngine, DifferentSeedsDiffer) {
  const auto a = run_trajectory(two_arm(ThompsonGaussian{}, ArmFamily::gaussian, 0.0, 50, 1));
  const auto b = run_trajectory(two_arm(ThompsonGaussian{}, ArmFamily::gaussian, 0.0, 50, 2));
  EXPECT_NE(a.rewards, b.rewards);
}

TEST(BanditEngine, UcbInitializesInOrder) {
  const auto traj = run_trajectory(two_arm(Ucb1{}, ArmFamily::gaussian, 0.0, 2, 3));
  EXPECT_EQ(traj.actions, (std::vector<int>{0, 1}));
}

TEST(BanditEngine, ReplayCheck) {
  const auto cfg = two_arm(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 0.1, 200, 5);
  auto traj = run_trajectory(cfg);
  EXPECT_TRUE(replay_check(traj, cfg));
  traj.reward_sums[1] += 1e-9;
  EXPECT_FALSE(replay_check(traj, cfg));
  traj = run_trajectory(cfg);
  traj.pull_counts[0] -= 1;
  EXPECT_FALSE(replay_check(traj, cfg));
}

TEST(BanditEngine, TrajectoryInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto traj = run_trajectory(two_arm(ThompsonGaussian{}, ArmFamily::gaussian, 0.3, 120, seed));
    EXPECT_EQ(traj.pull_counts[0] + traj.pull_counts[1], 120);
    for (int k = 0; k < 2; ++k) {
      EXPECT_EQ(std::ranges::count(traj.actions, k), traj.pull_counts[k]);
    }
  }
}

TEST(BanditEngine, HorizonBelowArmCountIsConfigError) {
  EXPECT_THROW(run_trajectory(two_arm(Ucb1{}, ArmFamily::gaussian, 0.0, 1, 1)), ConfigError);
  EXPECT_THROW(run_trajectory(two_arm(Ucb1{}, ArmFamily::gaussian, 0.0, 0, 1)), ConfigError);
}

TEST(BanditEngine, SingleArmIsConfigError) {
  ExperimentConfig cfg{ThetaVector{0.0}, location_model(ArmFamily::gaussian, 1), Ucb1{}, 10, 1};
  EXPECT_THROW(run_trajectory(cfg), ConfigError);
}

TEST(BanditEngine, PullCountsAtPrefix) {
  const auto traj = run_trajectory(two_arm(Ucb1{}, ArmFamily::gaussian, 0.5, 50, 9));
  EXPECT_EQ(pull_counts_at(traj, 2), (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(pull_counts_at(traj, 50), traj.pull_counts);
}

TEST(BanditEngine, RctFrequenciesConcentrate) {
  const std::int64_t horizon = 1000;
  const std::vector<double> w{0.3, 0.7};
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto traj = run_trajectory(two_arm(Rct{w}, ArmFamily::gaussian, 0.0, horizon, seed));
    bool ok = true;
    for (int k = 0; k < 2; ++k) {
      const double freq = static_cast<double>(traj.pull_counts[k]) / horizon;
      ok = ok && std::abs(freq - w[k]) <= 4.0 * std::sqrt(w[k] * (1.0 - w[k]) / horizon);
    }
    inside += ok;
  }
  EXPECT_GE(inside, 990);
}

TEST(BanditEngine, AdaptivePoliciesFavourBestArm) {
  for (const PolicySpec& p : {PolicySpec(ThompsonGaussian{}), PolicySpec(Ucb1{})}) {
    std::vector<double> share;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto traj = run_trajectory(two_arm(p, ArmFamily::gaussian, 1.0, 100000, seed));
      share.push_back(static_cast<double>(traj.pull_counts[0]) / 100000.0);
    }
    EXPECT_GE(median(share), 0.9) << p.name();
  }
}

TEST(BanditEngine, UcbPullsEveryArm) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ExperimentConfig cfg{ThetaVector{3.0, 0.0, -1.0}, location_model(ArmFamily::gaussian, 3), Ucb1{}, 3, seed};
    const auto traj = run_trajectory(cfg);
    EXPECT_TRUE(std::ranges::all_of(traj.pull_counts, [](std::int64_t d) { return d >= 1; }));
  }
}

TEST(BanditEngine, ThompsonPullsEveryArmAtSmallGap) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto traj =
        run_trajectory(two_arm(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 2.0 / std::sqrt(500.0), 500, seed));
    EXPECT_GE(traj.pull_counts[1], 1);
    EXPECT_GE(traj.pull_counts[0], 1);
  }
}

TEST(BanditEngine, RewardsFollowArmLaw) {
  // Pool each arm's rewards over seeds and compare with its CDF.
  for (const PolicySpec& p : {PolicySpec(ThompsonGaussian{}), PolicySpec(Ucb1{})}) {
    std::vector<double> first, second;
    const double mu = 0.4;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto traj = run_trajectory(two_arm(p, ArmFamily::logistic_unit_var, mu, 500, seed));
      for (std::size_t t = 0; t < traj.actions.size(); ++t) {
        (traj.actions[t] == 0 ? first : second).push_back(traj.rewards[t]);
      }
    }
    const auto ks1 = ks_distance(first, [&](double x) { return logistic_cdf(x - mu); }).distance;
    const auto ks2 = ks_distance(second, logistic_cdf).distance;
    // Critical value of the one-sample KS test at level 0.01.
    EXPECT_LT(ks1, 1.63 / std::sqrt(static_cast<double>(first.size())));
    EXPECT_LT(ks2, 1.63 / std::sqrt(static_cast<double>(second.size())));
  }
}

TEST(BanditEngine, TrajectoryCsv) {
  Trajectory traj;
  traj.actions = {0, 1};
  traj.rewards = {0.5, -1.25};
  traj.pull_counts = {1, 1};
  traj.reward_sums = {0.5, -1.25};
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  EXPECT_EQ(out.str(), "t,action,reward\n1,1,0.5\n2,2,-1.25\n");
}
