#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "banditlan/random.hpp"

namespace banditlan {

class PolicySpec;

/// Gaussian Thompson sampling with prior N(0, prior_var) on each arm mean and
/// a Gaussian likelihood of variance assumed_var, whatever the true law.
struct ThompsonGaussian {
  double prior_var = 1.0;
  double assumed_var = 1.0;
};

/// Pulls each arm once (lowest unpulled index first), then maximizes
/// R_k / D_k + sqrt(2 ln(t + 1) / D_k); ties go to the lowest index.
struct Ucb1 {};

/// History-independent sampling with fixed weights.
struct Rct {
  std::vector<double> weights;
};

/// Inner probabilities projected onto [epsilon, 1 - (K-1) epsilon] intersected
/// with the simplex.
struct Clipped {
  std::shared_ptr<const PolicySpec> inner;
  double epsilon = 0.05;
};

class PolicySpec {
 public:
  using Kind = std::variant<ThompsonGaussian, Ucb1, Rct, Clipped>;

  template <typename T>
    requires std::constructible_from<Kind, T>
  PolicySpec(T kind) : kind_(std::move(kind)) {}  // NOLINT(google-explicit-constructor)

  const Kind& kind() const { return kind_; }
  std::string_view name() const;

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&kind_);
  }

 private:
  Kind kind_;
};

PolicySpec clipped(PolicySpec inner, double epsilon);

/// Structural checks for use with `arm_count` arms. Throws ConfigError.
/// Rct weights must be nonnegative and sum to 1; strict positivity is a
/// config-file rule, enforced where the config is parsed.
void validate_policy(const PolicySpec& spec, int arm_count);

/// Per-arm pull counts D_k, reward sums R_k and the round t the policy sees.
class PolicyState {
 public:
  explicit PolicyState(int arm_count);

  int arm_count() const { return static_cast<int>(counts_.size()); }
  std::int64_t round() const { return round_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::span<const double> sums() const { return sums_; }

  /// Records one pull. Throws ContractViolation for an arm outside [0, K).
  void update(int arm, double reward);

 private:
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
  std::int64_t round_ = 0;
};

struct GaussianPosterior {
  std::vector<double> means;
  std::vector<double> variances;
};

/// Posterior of each arm mean under the Thompson prior; with unit prior and
/// assumed variance this is N(R_k / (D_k + 1), 1 / (D_k + 1)).
GaussianPosterior thompson_posterior(const PolicyState& state, const ThompsonGaussian& spec);

/// Exact conditional action probabilities given the history summary.
/// Thompson sampling has a closed form only for K = 2; for K > 2 this throws
/// ContractViolation and estimate_action_probabilities must be used instead.
std::vector<double> action_probabilities(const PolicyState& state, const PolicySpec& spec);
void action_probabilities_into(const PolicyState& state, const PolicySpec& spec,
                               std::span<double> out);

/// Monte Carlo estimate of the probabilities (posterior-draw argmax) for
/// Thompson with K > 2; other policies return their exact probabilities.
std::vector<double> estimate_action_probabilities(const PolicyState& state, const PolicySpec& spec,
                                                  RandomStream& rng, std::int64_t draws);

/// Draws the next arm (0-based). Consumes one uniform, except Thompson with
/// K > 2 which consumes one normal per arm.
int draw_action(const PolicyState& state, const PolicySpec& spec, RandomStream& rng);

}  // namespace banditlan
