#include "banditlan/arm_models.hpp"

#include <cmath>
#include <string>

#include "banditlan/errors.hpp"

namespace banditlan {

namespace {

Eigen::VectorXd checked(Eigen::VectorXd v) {
  if (v.size() < 1) throw ConfigError("theta needs at least one component");
  if (!v.allFinite()) throw ConfigError("theta components must be finite");
  return v;
}

Eigen::VectorXd from_list(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (double x : values) v[j++] = x;
  return v;
}

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

}  // namespace

ThetaVector::ThetaVector(Eigen::VectorXd components) : components_(checked(std::move(components))) {}

ThetaVector::ThetaVector(std::initializer_list<double> components)
    : components_(checked(from_list(components))) {}

ThetaVector ThetaVector::plus(const Eigen::VectorXd& step) const {
  if (step.size() != size()) throw ConfigError("parameter step has the wrong dimension");
  return ThetaVector(components_ + step);
}

ThetaVector ThetaVector::with_component(Eigen::Index j, double value) const {
  Eigen::VectorXd v = components_;
  v[j] = value;
  return ThetaVector(std::move(v));
}

std::string_view family_name(ArmFamily family) {
  switch (family) {
    case ArmFamily::gaussian:
      return "gaussian";
    case ArmFamily::logistic_unit_var:
      return "logistic_unit_var";
  }
  return "unknown";
}

ArmFamily parse_family(std::string_view name) {
  if (name == "gaussian") return ArmFamily::gaussian;
  if (name == "logistic_unit_var") return ArmFamily::logistic_unit_var;
  throw ConfigError("unknown arm family '" + std::string(name) + "'");
}

ArmModel::ArmModel(ArmFamily family, double variance, Eigen::Index component, double offset)
    : family_(family), variance_(variance), component_(component), offset_(offset) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("arm variance must be positive and finite");
  }
  if (component < 0) throw ConfigError("arm component index must be nonnegative");
  if (!std::isfinite(offset)) throw ConfigError("arm offset must be finite");
}

ArmModel ArmModel::gaussian(double sigma2, Eigen::Index component, double offset) {
  return ArmModel(ArmFamily::gaussian, sigma2, component, offset);
}

ArmModel ArmModel::logistic_unit_var(Eigen::Index component, double offset) {
  return ArmModel(ArmFamily::logistic_unit_var, 1.0, component, offset);
}

std::vector<ArmModel> location_model(ArmFamily family, int arm_count, double sigma2) {
  std::vector<ArmModel> arms;
  arms.reserve(static_cast<std::size_t>(arm_count));
  for (int k = 0; k < arm_count; ++k) {
    arms.push_back(family == ArmFamily::gaussian ? ArmModel::gaussian(sigma2, k)
                                                 : ArmModel::logistic_unit_var(k));
  }
  return arms;
}

void check_compatible(const ArmModel& arm, const ThetaVector& theta) {
  if (arm.component() >= theta.size()) {
    throw ConfigError("arm reads theta component " + std::to_string(arm.component() + 1) +
                      " but theta has only " + std::to_string(theta.size()));
  }
}

double sample(const ArmModel& arm, const ThetaVector& theta, RandomStream& rng) {
  const double mu = arm.location(theta);
  switch (arm.family()) {
    case ArmFamily::gaussian:
      return mu + std::sqrt(arm.variance()) * rng.normal();
    case ArmFamily::logistic_unit_var: {
      const double u = rng.open_uniform();
      return mu + kLogisticScale * std::log(u / (1.0 - u));
    }
  }
  return mu;
}

double log_density(const ArmModel& arm, const ThetaVector& theta, double z) {
  const double dev = z - arm.location(theta);
  switch (arm.family()) {
    case ArmFamily::gaussian:
      return -kHalfLogTwoPi - 0.5 * std::log(arm.variance()) - 0.5 * dev * dev / arm.variance();
    case ArmFamily::logistic_unit_var: {
      const double x = std::abs(dev) / kLogisticScale;
      return -std::log(kLogisticScale) - x - 2.0 * std::log1p(std::exp(-x));
    }
  }
  return 0.0;
}

double log_density_ratio(const ArmModel& arm, const ThetaVector& from, const ThetaVector& to,
                         double z) {
  if (arm.family() == ArmFamily::gaussian) {
    const double mu0 = arm.location(from);
    const double mu1 = arm.location(to);
    return (mu1 - mu0) * ((z - mu0) + (z - mu1)) / (2.0 * arm.variance());
  }
  return log_density(arm, to, z) - log_density(arm, from, z);
}

double score_component(const ArmModel& arm, const ThetaVector& theta, double z) {
  const double dev = z - arm.location(theta);
  switch (arm.family()) {
    case ArmFamily::gaussian:
      return dev / arm.variance();
    case ArmFamily::logistic_unit_var:
      return std::tanh(dev / (2.0 * kLogisticScale)) / kLogisticScale;
  }
  return 0.0;
}

ScoreVector score(const ArmModel& arm, const ThetaVector& theta, double z) {
  check_compatible(arm, theta);
  ScoreVector s = ScoreVector::Zero(theta.size());
  s[arm.component()] = score_component(arm, theta, z);
  return s;
}

double fisher_component(const ArmModel& arm) {
  switch (arm.family()) {
    case ArmFamily::gaussian:
      return 1.0 / arm.variance();
    case ArmFamily::logistic_unit_var:
      return 1.0 / (3.0 * kLogisticScale * kLogisticScale);
  }
  return 0.0;
}

FisherMatrix fisher(const ArmModel& arm, const ThetaVector& theta) {
  check_compatible(arm, theta);
  FisherMatrix j = FisherMatrix::Zero(theta.size(), theta.size());
  j(arm.component(), arm.component()) = fisher_component(arm);
  return j;
}

double mean(const ArmModel& arm, const ThetaVector& theta) { return arm.location(theta); }

double dqm_remainder_stat(const ArmModel& arm, const ThetaVector& theta,
                          const Eigen::VectorXd& omega, std::int64_t n, std::uint64_t seed) {
  if (n < 10000) throw ConfigError("dqm_remainder_stat needs at least 10^4 draws");
  check_compatible(arm, theta);
  const double norm2 = omega.squaredNorm();
  if (norm2 == 0.0) return 0.0;
  const ThetaVector shifted = theta.plus(omega);
  const double step = omega[arm.component()];
  RandomStream rng(seed);
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double z = sample(arm, theta, rng);
    const double root_ratio_minus_one = std::expm1(0.5 * log_density_ratio(arm, theta, shifted, z));
    const double r = 2.0 * root_ratio_minus_one - score_component(arm, theta, z) * step;
    acc += r * r;
  }
  return acc / static_cast<double>(n) / norm2;
}

}  // namespace banditlan
