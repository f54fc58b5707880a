#pragma once

#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "banditlan/random.hpp"

namespace banditlan {

using ScoreVector = Eigen::VectorXd;
using FisherMatrix = Eigen::MatrixXd;

/// The model parameter shared by all arms. Components are finite; p >= 1.
class ThetaVector {
 public:
  explicit ThetaVector(Eigen::VectorXd components);
  ThetaVector(std::initializer_list<double> components);

  Eigen::Index size() const { return components_.size(); }
  double operator[](Eigen::Index j) const { return components_[j]; }
  const Eigen::VectorXd& components() const { return components_; }

  /// theta + step. Throws ConfigError if the result is not finite.
  ThetaVector plus(const Eigen::VectorXd& step) const;
  ThetaVector with_component(Eigen::Index j, double value) const;

 private:
  Eigen::VectorXd components_;
};

enum class ArmFamily { gaussian, logistic_unit_var };

/// Scale of the logistic law with unit variance: Var = s^2 pi^2 / 3 = 1.
inline constexpr double kLogisticScale = std::numbers::sqrt3 / std::numbers::pi;

std::string_view family_name(ArmFamily family);
ArmFamily parse_family(std::string_view name);

/// A location-family reward law for one arm.
///
/// The arm reads exactly one component of theta: its mean is
/// theta[component] + offset. That component is the arm's declared
/// dependency; scores and Fisher entries for every other component are
/// structural zeros.
class ArmModel {
 public:
  static ArmModel gaussian(double sigma2, Eigen::Index component, double offset = 0.0);
  static ArmModel logistic_unit_var(Eigen::Index component, double offset = 0.0);

  ArmFamily family() const { return family_; }
  /// Reward variance: sigma^2 for the Gaussian family, 1 for the logistic one.
  double variance() const { return variance_; }
  Eigen::Index component() const { return component_; }
  double offset() const { return offset_; }
  bool depends_on(Eigen::Index j) const { return j == component_; }

  double location(const ThetaVector& theta) const { return theta[component_] + offset_; }

 private:
  ArmModel(ArmFamily family, double variance, Eigen::Index component, double offset);

  ArmFamily family_;
  double variance_;
  Eigen::Index component_;
  double offset_;
};

/// K arms of one family, arm k reading theta[k] (p = K).
std::vector<ArmModel> location_model(ArmFamily family, int arm_count, double sigma2 = 1.0);

/// Throws ConfigError unless every arm's component lies inside theta.
void check_compatible(const ArmModel& arm, const ThetaVector& theta);

double sample(const ArmModel& arm, const ThetaVector& theta, RandomStream& rng);

double log_density(const ArmModel& arm, const ThetaVector& theta, double z);

/// log f(z | to) - log f(z | from), evaluated without cancellation for the
/// Gaussian family.
double log_density_ratio(const ArmModel& arm, const ThetaVector& from, const ThetaVector& to,
                         double z);

/// d/d theta[component] log f(z | theta); the only nonzero score entry.
double score_component(const ArmModel& arm, const ThetaVector& theta, double z);
ScoreVector score(const ArmModel& arm, const ThetaVector& theta, double z);

/// Fisher information of the declared component (1/sigma^2 or 1/(3 s^2)).
double fisher_component(const ArmModel& arm);
FisherMatrix fisher(const ArmModel& arm, const ThetaVector& theta);

double mean(const ArmModel& arm, const ThetaVector& theta);

/// Monte Carlo estimate of E[r^2] / |omega|^2 for the quadratic-mean remainder
///   r(z | omega) = 2 (sqrt(f(z | theta + omega) / f(z | theta)) - 1) - score(z)' omega
/// from n draws of f(. | theta) seeded by `seed` (identical seeds give common
/// random numbers across omega). Returns 0 for omega = 0. Requires n >= 10^4.
double dqm_remainder_stat(const ArmModel& arm, const ThetaVector& theta,
                          const Eigen::VectorXd& omega, std::int64_t n, std::uint64_t seed);

}  // namespace banditlan
