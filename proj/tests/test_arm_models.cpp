#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "banditlan/arm_models.hpp"
#include "banditlan/errors.hpp"
#include "banditlan/oracles.hpp"

using namespace banditlan;

namespace {

const ArmModel kGauss1 = ArmModel::gaussian(1.0, 0);
const ArmModel kLogistic1 = ArmModel::logistic_unit_var(0);

}  // namespace

TEST(ArmModels, SampleIsDeterministicGivenSeed) {
  const ThetaVector theta{0.0, 0.0};
  RandomStream a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample(kGauss1, theta, a), sample(kGauss1, theta, b));
}

TEST(ArmModels, LogisticSampleMomentsMatchUnitVarianceLaw) {
  RandomStream rng(7);
  const ThetaVector at5{5.0, 0.0};
  const ThetaVector at0{0.0, 0.0};
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample(kLogistic1, at5, rng);
  EXPECT_NEAR(sum / n, 5.0, 0.01);

  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = sample(kLogistic1, at0, rng);
    s1 += z;
    s2 += z * z;
  }
  const double m = s1 / n;
  EXPECT_NEAR(s2 / n - m * m, 1.0, 0.02);
}

TEST(ArmModels, LogisticScaleGivesUnitVariance) {
  EXPECT_DOUBLE_EQ(kLogisticScale * kLogisticScale * std::numbers::pi * std::numbers::pi / 3.0, 1.0);
}

TEST(ArmModels, NonPositiveVarianceIsConfigError) {
  EXPECT_THROW(ArmModel::gaussian(0.0, 0), ConfigError);
  EXPECT_THROW(ArmModel::gaussian(-1.0, 0), ConfigError);
}

TEST(ArmModels, LogDensityKnownValues) {
  const ThetaVector theta{0.0, 0.0};
  EXPECT_NEAR(log_density(kGauss1, theta, 0.0), -0.5 * std::log(2.0 * std::numbers::pi), 1e-15);
  // ln(1 / (4 s)) with s = sqrt(3)/pi, evaluated independently.
  EXPECT_NEAR(log_density(kLogistic1, theta, 0.0), -0.7908706196045453, 1e-14);
}

TEST(ArmModels, LogDensityFiniteFarInTails) {
  const ThetaVector theta{0.0, 0.0};
  for (double z : {-1e3, -50.0, 50.0, 1e3}) {
    EXPECT_TRUE(std::isfinite(log_density(kGauss1, theta, z)));
    EXPECT_TRUE(std::isfinite(log_density(kLogistic1, theta, z)));
  }
}

TEST(ArmModels, LogDensityTranslationInvariance) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const auto& arm : {kGauss1, kLogistic1, ArmModel::gaussian(2.5, 0)}) {
    for (int i = 0; i < 200; ++i) {
      const double c = u(gen), a = u(gen);
      EXPECT_NEAR(log_density(arm, ThetaVector{c, 0.0}, c + a), log_density(arm, ThetaVector{0.0, 0.0}, a),
                  1e-12);
    }
  }
}

TEST(ArmModels, LogDensityRatioMatchesDifference) {
  const ThetaVector from{0.3, 0.0};
  const ThetaVector to{0.45, 0.0};
  for (const auto& arm : {kGauss1, kLogistic1}) {
    for (double z : {-2.0, 0.1, 3.7}) {
      EXPECT_NEAR(log_density_ratio(arm, from, to, z), log_density(arm, to, z) - log_density(arm, from, z),
                  1e-14);
    }
  }
}

TEST(ArmModels, ScoreKnownValues) {
  const ThetaVector theta{0.0, 0.0};
  const auto g = score(kGauss1, theta, 0.7);
  EXPECT_DOUBLE_EQ(g[0], 0.7);
  EXPECT_EQ(g[1], 0.0);

  const auto l0 = score(kLogistic1, theta, 0.0);
  EXPECT_EQ(l0[0], 0.0);
  EXPECT_EQ(l0[1], 0.0);

  // Frozen from a centered finite difference of the logistic log-density.
  const double fd = oracles::fd_score(kLogistic1, theta, 1.0, 0);
  EXPECT_NEAR(fd, 1.3052841530135812, 1e-8);
  const auto l1 = score(kLogistic1, theta, 1.0);
  EXPECT_NEAR(l1[0], 1.3052841530135812, 1e-12);
  EXPECT_EQ(l1[1], 0.0);
}

TEST(ArmModels, ScoreMatchesFiniteDifferencesOnGrid) {
  for (ArmFamily family : {ArmFamily::gaussian, ArmFamily::logistic_unit_var}) {
    for (double sigma2 : {0.5, 1.0, 3.0}) {
      for (const ThetaVector& theta : {ThetaVector{0.0, 0.0}, ThetaVector{2.0, -1.0}, ThetaVector{-0.3, 0.8}}) {
        for (const auto& arm : location_model(family, 2, sigma2)) {
          const double sd = std::sqrt(arm.variance());
          for (int i = 0; i <= 20; ++i) {
            const double z = mean(arm, theta) - 4.0 * sd + 0.4 * sd * i;
            const auto s = score(arm, theta, z);
            for (Eigen::Index j = 0; j < 2; ++j) {
              EXPECT_LT(std::abs(s[j] - oracles::fd_score(arm, theta, z, j)), 1e-5)
                  << family_name(family) << " z=" << z << " j=" << j;
            }
          }
        }
      }
    }
  }
}

TEST(ArmModels, StructuralZerosAreExact) {
  const ThetaVector theta{0.4, -1.2, 2.0};
  for (ArmFamily family : {ArmFamily::gaussian, ArmFamily::logistic_unit_var}) {
    for (const auto& arm : location_model(family, 3)) {
      const auto s = score(arm, theta, 0.37);
      const auto j = fisher(arm, theta);
      for (Eigen::Index a = 0; a < 3; ++a) {
        if (a != arm.component()) EXPECT_EQ(s[a], 0.0);
        for (Eigen::Index b = 0; b < 3; ++b) {
          if (a != arm.component() || b != arm.component()) EXPECT_EQ(j(a, b), 0.0);
        }
      }
      // Perturbing an undeclared component leaves the density unchanged.
      const Eigen::Index other = (arm.component() + 1) % 3;
      EXPECT_EQ(log_density(arm, theta, 0.37),
                log_density(arm, theta.with_component(other, theta[other] + 0.5), 0.37));
    }
  }
}

TEST(ArmModels, FisherKnownValues) {
  const ThetaVector theta{0.0, 0.0, 0.0};
  const auto g = fisher(ArmModel::gaussian(1.0, 1), theta);
  EXPECT_EQ(g(1, 1), 1.0);
  EXPECT_EQ(g.sum(), 1.0);
  EXPECT_EQ(fisher(ArmModel::gaussian(4.0, 2), theta)(2, 2), 0.25);

  const double quad = oracles::quadrature_fisher(ArmModel::logistic_unit_var(1), theta)(1, 1);
  EXPECT_NEAR(quad, std::numbers::pi * std::numbers::pi / 9.0, 1e-8);
  EXPECT_NEAR(fisher(ArmModel::logistic_unit_var(1), theta)(1, 1), 1.096622711232151, 1e-12);
}

TEST(ArmModels, FisherInvariantToLocation) {
  for (const auto& arm : {kGauss1, kLogistic1}) {
    EXPECT_EQ(fisher(arm, ThetaVector{0.0, 0.0}), fisher(arm, ThetaVector{-7.5, 3.0}));
  }
}

TEST(ArmModels, QuadratureAgreesWithClosedForms) {
  for (ArmFamily family : {ArmFamily::gaussian, ArmFamily::logistic_unit_var}) {
    for (const auto& arm : location_model(family, 2, 2.0)) {
      const ThetaVector theta{0.8, -0.4};
      const auto j = fisher(arm, theta);
      EXPECT_LT((oracles::quadrature_fisher(arm, theta) - j).cwiseAbs().maxCoeff(), 1e-3);
      for (Eigen::Index c = 0; c < 2; ++c) {
        const double m = oracles::expectation(arm, theta, [&](double z) { return score(arm, theta, z)[c]; });
        EXPECT_LT(std::abs(m), 5e-3 * std::sqrt(std::max(j(c, c), 1e-300)) + 1e-12);
      }
    }
  }
}

TEST(ArmModels, MeanOfLocationModel) {
  const auto arms = location_model(ArmFamily::logistic_unit_var, 2);
  EXPECT_EQ(mean(arms[1], ThetaVector{0.5, 0.0}), 0.0);
  const double gap = mean(arms[0], ThetaVector{50.0 / std::sqrt(500.0), 0.0});
  EXPECT_NEAR(gap, 2.23607, 1e-5);
  EXPECT_DOUBLE_EQ(mean(arms[0], ThetaVector{1.25, 0.0}) - mean(arms[0], ThetaVector{0.25, 0.0}), 1.0);
}

TEST(ArmModels, ArmOffsetShiftsMeanOnly) {
  const auto arm = ArmModel::gaussian(1.0, 0, -0.5);
  EXPECT_EQ(mean(arm, ThetaVector{1.0}), 0.5);
  EXPECT_EQ(score(arm, ThetaVector{1.0}, 0.5)[0], 0.0);
}

TEST(ArmModels, DqmRemainderAtZeroStepIsZero) {
  EXPECT_EQ(dqm_remainder_stat(kLogistic1, ThetaVector{0.0, 0.0}, Eigen::Vector2d::Zero(), 10000, 1), 0.0);
}

TEST(ArmModels, DqmRemainderDecaysForGaussian) {
  const ThetaVector theta{0.0, 0.0};
  const double small = dqm_remainder_stat(kGauss1, theta, Eigen::Vector2d(0.001, 0.0), 100000, 9);
  const double large = dqm_remainder_stat(kGauss1, theta, Eigen::Vector2d(0.1, 0.0), 100000, 9);
  EXPECT_LT(small, large);
}

TEST(ArmModels, DqmRemainderDecaysForLogistic) {
  const ThetaVector theta{0.0, 0.0};
  const double at01 = dqm_remainder_stat(kLogistic1, theta, Eigen::Vector2d(0.1, 0.0), 100000, 11);
  const double at001 = dqm_remainder_stat(kLogistic1, theta, Eigen::Vector2d(0.01, 0.0), 100000, 11);
  EXPECT_GE(at01 / at001, 5.0);
}

TEST(ArmModels, DqmRemainderNeedsEnoughDraws) {
  EXPECT_THROW(dqm_remainder_stat(kGauss1, ThetaVector{0.0, 0.0}, Eigen::Vector2d(0.1, 0.0), 100, 1),
               ConfigError);
}

TEST(ArmModels, ThetaRejectsNonFinite) {
  EXPECT_THROW(ThetaVector({0.0, NAN}), ConfigError);
  EXPECT_THROW(ThetaVector{Eigen::VectorXd{}}, ConfigError);
}

TEST(ArmModels, ArmMustFitTheta) {
  EXPECT_THROW(check_compatible(ArmModel::gaussian(1.0, 2), ThetaVector{0.0, 0.0}), ConfigError);
}
