#include <algorithm>
#include <cstring>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "banditlan/errors.hpp"
#include "banditlan/monte_carlo.hpp"
#include "banditlan/parallel.hpp"
#include "banditlan/stats.hpp"

using namespace banditlan;

namespace {

StudyConfig study(PolicySpec policy, ArmFamily family, std::int64_t reps, std::vector<double> grid,
                  int threads = 1) {
  return StudyConfig{.base_theta = ThetaVector{0.0, 0.0},
                     .arms = location_model(family, 2),
                     .policy = std::move(policy),
                     .horizon = 500,
                     .replications = reps,
                     .base_seed = 1,
                     .m1_grid = std::move(grid),
                     .threads = threads};
}

Trajectory counts_only(std::vector<std::int64_t> d, std::vector<double> r) {
  Trajectory traj;
  traj.pull_counts = std::move(d);
  traj.reward_sums = std::move(r);
  return traj;
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::memcmp(&*a, &*b, sizeof(double)) == 0;
}

bool same(const ReplicationRecord& a, const ReplicationRecord& b) {
  if (a.cell != b.cell || a.rep != b.rep || a.m1 != b.m1 || a.pulls != b.pulls) return false;
  if (a.tau_mu.size() != b.tau_mu.size()) return false;
  for (std::size_t k = 0; k < a.tau_mu.size(); ++k) {
    if (!same(a.tau_mu[k], b.tau_mu[k])) return false;
  }
  return same(a.tau_delta, b.tau_delta) && same(a.exact_llr, b.exact_llr) && same(a.quad_llr, b.quad_llr) &&
         same(a.residual, b.residual);
}

}  // namespace

TEST(MonteCarlo, ArmTStatistic) {
  EXPECT_DOUBLE_EQ(*t_stat_arm(counts_only({4, 1}, {10.0, 0.0}), 0, 2.0), 1.0);
  EXPECT_FALSE(t_stat_arm(counts_only({4, 0}, {10.0, 0.0}), 1, 0.0).has_value());
  EXPECT_EQ(*t_stat_arm(counts_only({4, 1}, {10.0, 0.0}), 0, 2.5), 0.0);
}

TEST(MonteCarlo, DifferenceTStatistic) {
  EXPECT_EQ(*t_stat_diff(counts_only({100, 100}, {100.0, 0.0}), 1.0), 0.0);
  EXPECT_NEAR(*t_stat_diff(counts_only({4, 1}, {5.0, 0.0}), 0.0), 1.118033988749895, 1e-15);
  EXPECT_FALSE(t_stat_diff(counts_only({5, 0}, {5.0, 0.0}), 0.0).has_value());
  EXPECT_THROW(t_stat_diff(counts_only({1, 1, 1}, {0.0, 0.0, 0.0}), 0.0), ConfigError);
}

TEST(MonteCarlo, SingleReplicationMatchesDirectRun) {
  const auto cfg = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 1, {10.0});
  const auto records = run_study(cfg);
  ASSERT_EQ(records.size(), 1u);
  const auto traj = run_trajectory(cfg.experiment(0, 0));
  EXPECT_TRUE(same(records[0], make_record(cfg, 0, 0, traj)));
  EXPECT_EQ(records[0].pulls, traj.pull_counts);
  const double mu1 = 10.0 / std::sqrt(500.0);
  EXPECT_TRUE(same(records[0].tau_delta, t_stat_diff(traj, mu1)));
}

TEST(MonteCarlo, SeedRecipe) {
  const auto cfg = study(Ucb1{}, ArmFamily::gaussian, 3, {2.0, 10.0});
  EXPECT_EQ(cfg.experiment(1, 2).seed, mix64(mix64(derive_seed(1, 1)) ^ mix64(2)));
}

TEST(MonteCarlo, RecordsAreOrderedAndConsistent) {
  const auto records = run_study(study(Ucb1{}, ArmFamily::gaussian, 7, {2.0, 10.0, 50.0}));
  ASSERT_EQ(records.size(), 21u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].cell, i / 7);
    EXPECT_EQ(records[i].rep, static_cast<std::int64_t>(i % 7));
    EXPECT_EQ(records[i].pulls[0] + records[i].pulls[1], 500);
  }
}

TEST(MonteCarlo, RepeatedRunsAreIdentical) {
  const auto cfg = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 50, {2.0, 75.0});
  const auto a = run_study(cfg);
  const auto b = run_study(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same(a[i], b[i]));
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  auto cfg = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 40, {2.0, 50.0});
  cfg.h = Eigen::Vector2d(1.0, 1.0);
  const auto serial = run_study(cfg);
  cfg.threads = 4;
  const auto parallel = run_study(cfg);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) EXPECT_TRUE(same(serial[i], parallel[i]));
}

TEST(MonteCarlo, ParallelForVisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_TRUE(std::ranges::all_of(hits, [](int h) { return h == 1; }));
}

TEST(MonteCarlo, ThompsonRarelyPullsWeakArmAtLargeGap) {
  const auto cfg = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 2000, {75.0});
  const auto summary = summarize(cfg, run_study(cfg));
  EXPECT_LE(summary[0].median_d2, 10.0);
}

TEST(MonteCarlo, MissingStatisticsMatchZeroCounts) {
  const auto cfg = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 1000, {75.0});
  const auto records = run_study(cfg);
  const auto summary = summarize(cfg, records);
  std::int64_t zero = 0, missing_delta = 0;
  for (const auto& r : records) {
    zero += std::ranges::any_of(r.pulls, [](std::int64_t d) { return d == 0; });
    missing_delta += !r.tau_delta.has_value();
    for (int k = 0; k < 2; ++k) EXPECT_EQ(r.tau_mu[k].has_value(), r.pulls[k] > 0);
  }
  EXPECT_GT(zero, 0);
  EXPECT_EQ(summary[0].n_missing, zero);
  EXPECT_EQ(missing_delta, zero);
}

TEST(MonteCarlo, StudyValidation) {
  EXPECT_THROW(validate(study(Ucb1{}, ArmFamily::gaussian, 0, {2.0})), ConfigError);
  EXPECT_THROW(validate(study(Ucb1{}, ArmFamily::gaussian, 10, {})), ConfigError);
  auto cfg = study(Ucb1{}, ArmFamily::gaussian, 10, {2.0});
  cfg.h = Eigen::Vector3d(1.0, 1.0, 1.0);
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(MonteCarlo, KsSinglePoint) {
  const std::vector<double> x{0.0};
  EXPECT_EQ(ks_distance(x).distance, 0.5);
}

TEST(MonteCarlo, KsExactQuantiles) {
  const boost::math::normal_distribution<double> n01;
  std::vector<double> x;
  for (int i = 1; i <= 1000; ++i) x.push_back(boost::math::quantile(n01, (i - 0.5) / 1000.0));
  const double d = ks_distance(x).distance;
  EXPECT_LT(d, 0.001);
  EXPECT_NEAR(d, 0.0005, 1e-9);
}

TEST(MonteCarlo, KsDisjointSupport) {
  std::vector<double> x;
  for (int i = 0; i < 100; ++i) x.push_back(10.0 + 0.01 * i);
  EXPECT_NEAR(ks_distance(x).distance, 1.0, 1e-6);
}

TEST(MonteCarlo, KsMissingValues) {
  const std::vector<std::optional<double>> x{0.0, std::nullopt, std::nullopt};
  const auto ks = ks_distance(x);
  EXPECT_EQ(ks.distance, 0.5);
  EXPECT_EQ(ks.used, 1);
  EXPECT_EQ(ks.missing, 2);
  const std::vector<std::optional<double>> none{std::nullopt};
  EXPECT_THROW(ks_distance(none), ConfigError);
}

TEST(MonteCarlo, Histogram) {
  const HistogramSpec spec{-1.0, 1.0, 4};
  const std::vector<double> x{-1.0, -2.0, 1.0, 0.999, 0.0, std::numeric_limits<double>::quiet_NaN()};
  const auto counts = histogram(x, spec);
  ASSERT_EQ(counts.size(), 6u);
  EXPECT_EQ(counts[0], 1);
  EXPECT_EQ(counts[1], 1);
  EXPECT_EQ(counts[3], 1);
  EXPECT_EQ(counts[4], 1);
  EXPECT_EQ(counts[5], 2);
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  EXPECT_EQ(total, static_cast<std::int64_t>(x.size()));
}

TEST(MonteCarlo, QuantileType7) {
  EXPECT_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.25), 1.75);
  EXPECT_EQ(median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_THROW(median({}), ConfigError);
}

TEST(MonteCarlo, ReferenceConstants) {
  auto cfg = study(ThompsonGaussian{}, ArmFamily::gaussian, 1, {1.0});
  cfg.gap_scaling = GapScaling::none;
  EXPECT_DOUBLE_EQ(*reference_rate_constant(cfg, cfg.theta_for(1.0), 1), 2.0);

  cfg.gap_scaling = GapScaling::root_horizon;
  EXPECT_NEAR(*reference_rate_constant(cfg, cfg.theta_for(50.0), 1), 0.4, 1e-12);

  auto ucb = study(Ucb1{}, ArmFamily::gaussian, 1, {1.0});
  ucb.gap_scaling = GapScaling::none;
  EXPECT_DOUBLE_EQ(*reference_rate_constant(ucb, ucb.theta_for(1.0), 1), 2.0);

  auto logistic = study(ThompsonGaussian{}, ArmFamily::logistic_unit_var, 1, {1.0});
  EXPECT_FALSE(reference_rate_constant(logistic, logistic.theta_for(1.0), 1).has_value());

  auto rct = study(Rct{{0.3, 0.7}}, ArmFamily::gaussian, 1, {1.0});
  rct.regime = RateRegime::linear;
  EXPECT_DOUBLE_EQ(*reference_rate_constant(rct, rct.theta_for(1.0), 1), 0.7);
}

TEST(MonteCarlo, ConvergenceTable) {
  auto cfg = study(ThompsonGaussian{}, ArmFamily::gaussian, 30, {1.0});
  cfg.gap_scaling = GapScaling::none;
  cfg.horizon = 2000;
  const auto rows = convergence_diag(cfg, {100, 2000});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].arm, 1);
  EXPECT_EQ(rows[0].statistic, "D/logT");
  EXPECT_EQ(*rows[1].reference, 2.0);
  EXPECT_LE(rows[1].q25, rows[1].median);
  EXPECT_LE(rows[1].median, rows[1].q75);

  auto rct = study(Rct{{0.5, 0.5}}, ArmFamily::gaussian, 30, {1.0});
  rct.regime = RateRegime::linear;
  const auto rct_rows = convergence_diag(rct, {500});
  ASSERT_EQ(rct_rows.size(), 2u);
  EXPECT_EQ(rct_rows[0].statistic, "D/T");
  EXPECT_EQ(*rct_rows[0].reference, 0.5);
  EXPECT_NEAR(rct_rows[0].median, 0.5, 0.1);

  EXPECT_THROW(convergence_diag(cfg, {1000, 100}), ConfigError);
  EXPECT_THROW(convergence_diag(cfg, {3000}), ConfigError);
  EXPECT_THROW(convergence_diag(cfg, {1}), ConfigError);
}
