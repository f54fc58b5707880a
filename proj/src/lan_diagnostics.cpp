#include "banditlan/lan_diagnostics.hpp"

#include <cmath>
#include <string>

#include "banditlan/errors.hpp"

namespace banditlan {

namespace {

void check_arm_index(std::span<const ArmModel> arms, int arm) {
  if (arm < 0 || arm >= static_cast<int>(arms.size())) {
    throw ContractViolation("arm index " + std::to_string(arm) + " out of range");
  }
}

void check_trajectory(const Trajectory& traj, std::span<const ArmModel> arms) {
  if (traj.arm_count() != static_cast<int>(arms.size())) {
    throw ContractViolation("trajectory and arm list disagree on K");
  }
}

}  // namespace

std::string_view regime_name(RateRegime regime) {
  return regime == RateRegime::logarithmic ? "case_b" : "case_b_star";
}

RateRegime parse_regime(std::string_view name) {
  if (name == "case_b" || name == "log") return RateRegime::logarithmic;
  if (name == "case_b_star" || name == "linear") return RateRegime::linear;
  throw ConfigError("unknown rate regime '" + std::string(name) + "'");
}

int optimal_arm(const ThetaVector& theta, std::span<const ArmModel> arms) {
  if (arms.empty()) throw ContractViolation("optimal_arm of an empty arm list");
  int best = 0;
  double best_mean = mean(arms[0], theta);
  bool tied = false;
  for (std::size_t k = 1; k < arms.size(); ++k) {
    const double m = mean(arms[k], theta);
    if (m > best_mean) {
      best = static_cast<int>(k);
      best_mean = m;
      tied = false;
    } else if (m == best_mean) {
      tied = true;
    }
  }
  if (tied) {
    throw UniqueOptimalArmViolation("several arms share the largest mean; no unique optimal arm");
  }
  return best;
}

bool info_entry_declared(const ArmModel& arm, Eigen::Index row, Eigen::Index col) {
  return arm.depends_on(row) && arm.depends_on(col);
}

RateMatrix::RateMatrix(Eigen::VectorXd diag, std::int64_t horizon, RateRegime regime,
                       int optimal_arm)
    : diag_(std::move(diag)), horizon_(horizon), regime_(regime), optimal_arm_(optimal_arm) {
  if (horizon < 2) throw ContractViolation("rate matrix needs T >= 2");
  if (!(diag_.array() > 0.0).all()) throw ContractViolation("rates must be positive");
}

double RateMatrix::s_T() const {
  const auto t = static_cast<double>(horizon_);
  return regime_ == RateRegime::logarithmic ? std::log(t) : t;
}

double RateMatrix::arm_rate(int arm) const {
  return arm == optimal_arm_ ? std::sqrt(static_cast<double>(horizon_)) : std::sqrt(s_T());
}

RateMatrix rate_matrix(const ThetaVector& theta, std::span<const ArmModel> arms,
                       std::int64_t horizon, RateRegime regime) {
  if (horizon < 2) throw ContractViolation("rate matrix needs T >= 2");
  for (const auto& arm : arms) check_compatible(arm, theta);
  const int best = optimal_arm(theta, arms);
  const auto t = static_cast<double>(horizon);
  const double fast = std::sqrt(t);
  const double slow = std::sqrt(regime == RateRegime::logarithmic ? std::log(t) : t);
  Eigen::VectorXd diag(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    diag[j] = info_entry_declared(arms[static_cast<std::size_t>(best)], j, j) ? fast : slow;
  }
  return RateMatrix(std::move(diag), horizon, regime, best);
}

ThetaVector localize(const ThetaVector& theta, const Eigen::VectorXd& h, const RateMatrix& rates) {
  if (h.size() != theta.size() || rates.diag().size() != theta.size()) {
    throw ContractViolation("localize: dimension mismatch");
  }
  return theta.plus(h.cwiseQuotient(rates.diag()));
}

Eigen::VectorXd per_arm_score_stat(const Trajectory& traj, const ThetaVector& theta,
                                   std::span<const ArmModel> arms, int arm,
                                   const RateMatrix& rates) {
  check_arm_index(arms, arm);
  check_trajectory(traj, arms);
  const ArmModel& model = arms[static_cast<std::size_t>(arm)];
  check_compatible(model, theta);
  double sum = 0.0;
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    if (traj.actions[t] == arm) sum += score_component(model, theta, traj.rewards[t]);
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(theta.size());
  s[model.component()] = sum / rates.arm_rate(arm);
  return s;
}

Eigen::MatrixXd per_arm_info_stat(const Trajectory& traj, const ThetaVector& theta,
                                  std::span<const ArmModel> arms, int arm,
                                  const RateMatrix& rates) {
  check_arm_index(arms, arm);
  check_trajectory(traj, arms);
  const double a = rates.arm_rate(arm);
  const auto pulls = static_cast<double>(traj.pull_counts[static_cast<std::size_t>(arm)]);
  return (pulls / (a * a)) * fisher(arms[static_cast<std::size_t>(arm)], theta);
}

Eigen::VectorXd central_sequence(std::span<const Eigen::VectorXd> per_arm_scores,
                                 const ThetaVector& theta, std::span<const ArmModel> arms,
                                 RateRegime regime) {
  if (per_arm_scores.size() != arms.size()) {
    throw ContractViolation("central_sequence needs one score vector per arm");
  }
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(theta.size());
  if (regime == RateRegime::linear) {
    for (const auto& s : per_arm_scores) delta += s;
    return delta;
  }
  const int best = optimal_arm(theta, arms);
  const ArmModel& best_arm = arms[static_cast<std::size_t>(best)];
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    delta[j] = per_arm_scores[static_cast<std::size_t>(best)][j];
    if (!info_entry_declared(best_arm, j, j)) {
      for (std::size_t k = 0; k < arms.size(); ++k) {
        if (static_cast<int>(k) != best) delta[j] += per_arm_scores[k][j];
      }
    }
  }
  return delta;
}

Eigen::MatrixXd info_matrix(const ThetaVector& theta, std::span<const ArmModel> arms,
                            std::optional<std::span<const double>> rate_constants,
                            RateRegime regime) {
  const Eigen::Index p = theta.size();
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
  if (regime == RateRegime::linear) {
    if (!rate_constants) throw ConfigError("the linear regime needs pull-rate constants C_k");
    if (rate_constants->size() != arms.size()) {
      throw ConfigError("one pull-rate constant per arm is required");
    }
    for (std::size_t k = 0; k < arms.size(); ++k) info += (*rate_constants)[k] * fisher(arms[k], theta);
    return info;
  }
  const int best = optimal_arm(theta, arms);
  const ArmModel& best_arm = arms[static_cast<std::size_t>(best)];
  info = fisher(best_arm, theta);
  Eigen::MatrixXd others = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < arms.size(); ++k) {
    if (static_cast<int>(k) != best) others += fisher(arms[k], theta);
  }
  for (Eigen::Index l = 0; l < p; ++l) {
    for (Eigen::Index m = 0; m < p; ++m) {
      if (!info_entry_declared(best_arm, l, m)) info(l, m) += others(l, m);
    }
  }
  return info;
}

double exact_log_lr(const Trajectory& traj, const ThetaVector& theta,
                    const ThetaVector& alternative, std::span<const ArmModel> arms) {
  check_trajectory(traj, arms);
  double llr = 0.0;
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    llr += log_density_ratio(arms[static_cast<std::size_t>(traj.actions[t])], theta, alternative,
                             traj.rewards[t]);
  }
  return llr;
}

double per_arm_lambda(const Trajectory& traj, const ThetaVector& theta,
                      std::span<const ArmModel> arms, int arm, const Eigen::VectorXd& u,
                      const RateMatrix& rates) {
  check_arm_index(arms, arm);
  check_trajectory(traj, arms);
  const ArmModel& model = arms[static_cast<std::size_t>(arm)];
  const ThetaVector shifted = theta.plus(u / rates.arm_rate(arm));
  double sum = 0.0;
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    if (traj.actions[t] == arm) sum += log_density_ratio(model, theta, shifted, traj.rewards[t]);
  }
  return sum;
}

double quadratic_approx(const Eigen::VectorXd& delta, const Eigen::MatrixXd& info,
                        const Eigen::VectorXd& h) {
  if (delta.size() != h.size() || info.rows() != h.size() || info.cols() != h.size()) {
    throw ContractViolation("quadratic_approx: dimension mismatch");
  }
  return h.dot(delta) - 0.5 * h.dot(info * h);
}

ExpansionReport expand(const Trajectory& traj, const ThetaVector& theta,
                       std::span<const ArmModel> arms, const Eigen::VectorXd& h,
                       RateRegime regime, std::optional<std::span<const double>> rate_constants) {
  const RateMatrix rates = rate_matrix(theta, arms, traj.horizon(), regime);
  ExpansionReport report;
  const auto k = arms.size();
  report.per_arm_scores.reserve(k);
  report.per_arm_info.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    report.per_arm_scores.push_back(per_arm_score_stat(traj, theta, arms, static_cast<int>(i), rates));
    report.per_arm_info.push_back(per_arm_info_stat(traj, theta, arms, static_cast<int>(i), rates));
  }
  report.central_sequence = central_sequence(report.per_arm_scores, theta, arms, regime);

  std::vector<double> empirical;
  if (regime == RateRegime::linear && !rate_constants) {
    for (auto d : traj.pull_counts) {
      empirical.push_back(static_cast<double>(d) / static_cast<double>(traj.horizon()));
    }
    rate_constants = std::span<const double>(empirical);
  }
  report.info_matrix = info_matrix(theta, arms, rate_constants, regime);
  report.exact_llr = exact_log_lr(traj, theta, localize(theta, h, rates), arms);
  report.quad_llr = quadratic_approx(report.central_sequence, report.info_matrix, h);
  report.residual = report.exact_llr - report.quad_llr;
  return report;
}

}  // namespace banditlan
