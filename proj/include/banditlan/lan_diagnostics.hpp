#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "banditlan/arm_models.hpp"
#include "banditlan/bandit_engine.hpp"

namespace banditlan {

/// How fast suboptimal arms are pulled, declared by the user.
///   logarithmic: D_k / log T converges for k != k*   (s_T = log T)
///   linear:      D_k / T converges for every arm     (s_T = T)
enum class RateRegime { logarithmic, linear };

std::string_view regime_name(RateRegime regime);
RateRegime parse_regime(std::string_view name);

/// Index of the arm with the strictly largest mean.
/// Throws UniqueOptimalArmViolation on a tie at the top.
int optimal_arm(const ThetaVector& theta, std::span<const ArmModel> arms);

/// True iff J_{theta,k}[row, col] is not a structural zero.
bool info_entry_declared(const ArmModel& arm, Eigen::Index row, Eigen::Index col);

/// Diagonal localization rates: sqrt(T) for components the optimal arm is
/// informative about, sqrt(s_T) for the rest.
class RateMatrix {
 public:
  RateMatrix(Eigen::VectorXd diag, std::int64_t horizon, RateRegime regime, int optimal_arm);

  const Eigen::VectorXd& diag() const { return diag_; }
  std::int64_t horizon() const { return horizon_; }
  RateRegime regime() const { return regime_; }
  int optimal_arm() const { return optimal_arm_; }
  double s_T() const;
  /// a_{k,T}: sqrt(T) for the optimal arm, sqrt(s_T) otherwise.
  double arm_rate(int arm) const;

 private:
  Eigen::VectorXd diag_;
  std::int64_t horizon_;
  RateRegime regime_;
  int optimal_arm_;
};

/// Requires T >= 2.
RateMatrix rate_matrix(const ThetaVector& theta, std::span<const ArmModel> arms,
                       std::int64_t horizon, RateRegime regime);

/// theta + R^{-1} h.
ThetaVector localize(const ThetaVector& theta, const Eigen::VectorXd& h, const RateMatrix& rates);

/// S_{k,T} = a_{k,T}^{-1} sum_{t: A_t = k} score_k(Y_t).
Eigen::VectorXd per_arm_score_stat(const Trajectory& traj, const ThetaVector& theta,
                                   std::span<const ArmModel> arms, int arm,
                                   const RateMatrix& rates);

/// J_{k,T} = (D_{k,T} / a_{k,T}^2) J_{theta,k}.
Eigen::MatrixXd per_arm_info_stat(const Trajectory& traj, const ThetaVector& theta,
                                  std::span<const ArmModel> arms, int arm,
                                  const RateMatrix& rates);

/// Central sequence from per-arm score statistics. Under the logarithmic
/// regime a suboptimal arm contributes to component j only where the optimal
/// arm's Fisher diagonal is a structural zero.
Eigen::VectorXd central_sequence(std::span<const Eigen::VectorXd> per_arm_scores,
                                 const ThetaVector& theta, std::span<const ArmModel> arms,
                                 RateRegime regime);

/// Limit information matrix. The linear regime needs the pull-rate constants
/// C_k (throws ConfigError without them); the logarithmic regime ignores them.
Eigen::MatrixXd info_matrix(const ThetaVector& theta, std::span<const ArmModel> arms,
                            std::optional<std::span<const double>> rate_constants,
                            RateRegime regime);

/// sum_t log f_{A_t}(Y_t | alternative) / f_{A_t}(Y_t | theta). Policy factors
/// cancel and are never formed.
double exact_log_lr(const Trajectory& traj, const ThetaVector& theta,
                    const ThetaVector& alternative, std::span<const ArmModel> arms);

/// Lambda_k(u) = sum_{t: A_t = k} log f_k(Y_t | theta + u / a_{k,T}) / f_k(Y_t | theta).
double per_arm_lambda(const Trajectory& traj, const ThetaVector& theta,
                      std::span<const ArmModel> arms, int arm, const Eigen::VectorXd& u,
                      const RateMatrix& rates);

/// h' delta - h' info h / 2.
double quadratic_approx(const Eigen::VectorXd& delta, const Eigen::MatrixXd& info,
                        const Eigen::VectorXd& h);

struct ExpansionReport {
  std::vector<Eigen::VectorXd> per_arm_scores;
  std::vector<Eigen::MatrixXd> per_arm_info;
  Eigen::VectorXd central_sequence;
  Eigen::MatrixXd info_matrix;
  double exact_llr = 0.0;
  double quad_llr = 0.0;
  double residual = 0.0;
};

/// Full expansion of one trajectory at local alternative h. Under the linear
/// regime the constants default to the empirical D_{k,T} / T.
ExpansionReport expand(const Trajectory& traj, const ThetaVector& theta,
                       std::span<const ArmModel> arms, const Eigen::VectorXd& h,
                       RateRegime regime,
                       std::optional<std::span<const double>> rate_constants = std::nullopt);

}  // namespace banditlan
