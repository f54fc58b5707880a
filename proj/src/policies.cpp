#include "banditlan/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "banditlan/errors.hpp"
#include "banditlan/stats.hpp"

namespace banditlan {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Euclidean projection of p onto {q : sum q = 1, lo <= q_k <= hi}. The map
// lambda -> sum_k clamp(p_k + lambda, lo, hi) is piecewise linear and
// nondecreasing, so the root is found between consecutive breakpoints.
void project_onto_box_simplex(std::span<double> p, double lo, double hi) {
  const std::size_t k = p.size();
  auto total = [&](double lambda) {
    double s = 0.0;
    for (double x : p) s += std::clamp(x + lambda, lo, hi);
    return s;
  };
  std::vector<double> breakpoints;
  breakpoints.reserve(2 * k);
  for (double x : p) {
    breakpoints.push_back(lo - x);
    breakpoints.push_back(hi - x);
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  double lambda = breakpoints.back();
  double prev_b = breakpoints.front();
  double prev_g = total(prev_b);
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double b = breakpoints[i];
    const double g = total(b);
    if (g >= 1.0) {
      lambda = g > prev_g ? prev_b + (1.0 - prev_g) * (b - prev_b) / (g - prev_g) : prev_b;
      break;
    }
    prev_b = b;
    prev_g = g;
  }
  for (double& x : p) x = std::clamp(x + lambda, lo, hi);
}

void thompson_two_arm(const PolicyState& state, const ThompsonGaussian& spec, std::span<double> out) {
  const auto counts = state.counts();
  const auto sums = state.sums();
  double mean[2];
  double var[2];
  for (int k = 0; k < 2; ++k) {
    const double precision =
        1.0 / spec.prior_var + static_cast<double>(counts[k]) / spec.assumed_var;
    var[k] = 1.0 / precision;
    mean[k] = var[k] * sums[k] / spec.assumed_var;
  }
  const double x = (mean[1] - mean[0]) / std::sqrt(var[0] + var[1]);
  out[0] = normal_cdf(-x);
  out[1] = normal_cdf(x);
}

void ucb1(const PolicyState& state, std::span<double> out) {
  const auto counts = state.counts();
  const auto sums = state.sums();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      out[k] = 1.0;
      return;
    }
  }
  const double log_term = 2.0 * std::log(static_cast<double>(state.round() + 1));
  std::size_t best = 0;
  double best_index = -INFINITY;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double d = static_cast<double>(counts[k]);
    const double index = sums[k] / d + std::sqrt(log_term / d);
    if (index > best_index) {
      best_index = index;
      best = k;
    }
  }
  out[best] = 1.0;
}

int sample_index(std::span<const double> probs, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) last_positive = static_cast<int>(k);
    acc += probs[k];
    if (u < acc && probs[k] > 0.0) return static_cast<int>(k);
  }
  return last_positive;
}

int thompson_posterior_draw(const PolicyState& state, const ThompsonGaussian& spec,
                            RandomStream& rng) {
  const auto post = thompson_posterior(state, spec);
  int best = 0;
  double best_draw = -INFINITY;
  for (std::size_t k = 0; k < post.means.size(); ++k) {
    const double draw = post.means[k] + std::sqrt(post.variances[k]) * rng.normal();
    if (draw > best_draw) {
      best_draw = draw;
      best = static_cast<int>(k);
    }
  }
  return best;
}

}  // namespace

std::string_view PolicySpec::name() const {
  return std::visit(overloaded{[](const ThompsonGaussian&) { return std::string_view("thompson"); },
                               [](const Ucb1&) { return std::string_view("ucb1"); },
                               [](const Rct&) { return std::string_view("rct"); },
                               [](const Clipped&) { return std::string_view("clipped"); }},
                    kind_);
}

PolicySpec clipped(PolicySpec inner, double epsilon) {
  return PolicySpec(Clipped{std::make_shared<const PolicySpec>(std::move(inner)), epsilon});
}

void validate_policy(const PolicySpec& spec, int arm_count) {
  if (arm_count < 2) throw ConfigError("a bandit needs at least two arms");
  std::visit(
      overloaded{
          [](const ThompsonGaussian& t) {
            if (!(t.prior_var > 0.0) || !(t.assumed_var > 0.0)) {
              throw ConfigError("thompson.prior_var and thompson.assumed_var must be positive");
            }
          },
          [](const Ucb1&) {},
          [arm_count](const Rct& r) {
            if (static_cast<int>(r.weights.size()) != arm_count) {
              throw ConfigError("rct.weights needs one weight per arm");
            }
            double sum = 0.0;
            for (double w : r.weights) {
              if (!(w >= 0.0) || !std::isfinite(w)) {
                throw ConfigError("rct.weights must be nonnegative");
              }
              sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("rct.weights must sum to 1");
          },
          [arm_count](const Clipped& c) {
            if (!c.inner) throw ConfigError("clipped policy without inner policy");
            if (c.inner->get_if<Clipped>()) throw ConfigError("clipped.inner cannot be clipped");
            if (c.inner->get_if<ThompsonGaussian>() && arm_count != 2) {
              throw ConfigError("clipped thompson needs exact probabilities, available for K = 2 only");
            }
            if (!(c.epsilon > 0.0 && c.epsilon < 1.0 / arm_count)) {
              throw ConfigError("clipped.epsilon must lie in (0, 1/K)");
            }
            validate_policy(*c.inner, arm_count);
          }},
      spec.kind());
}

PolicyState::PolicyState(int arm_count)
    : counts_(static_cast<std::size_t>(arm_count), 0), sums_(static_cast<std::size_t>(arm_count), 0.0) {
  if (arm_count < 1) throw ContractViolation("policy state needs at least one arm");
}

void PolicyState::update(int arm, double reward) {
  if (arm < 0 || arm >= arm_count()) {
    throw ContractViolation("update with arm " + std::to_string(arm) + " outside [0, " +
                            std::to_string(arm_count()) + ")");
  }
  const auto k = static_cast<std::size_t>(arm);
  ++counts_[k];
  sums_[k] += reward;
  ++round_;
}

GaussianPosterior thompson_posterior(const PolicyState& state, const ThompsonGaussian& spec) {
  GaussianPosterior post;
  const auto k = static_cast<std::size_t>(state.arm_count());
  post.means.resize(k);
  post.variances.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double precision =
        1.0 / spec.prior_var + static_cast<double>(state.counts()[i]) / spec.assumed_var;
    post.variances[i] = 1.0 / precision;
    post.means[i] = post.variances[i] * state.sums()[i] / spec.assumed_var;
  }
  return post;
}

void action_probabilities_into(const PolicyState& state, const PolicySpec& spec,
                               std::span<double> out) {
  if (static_cast<int>(out.size()) != state.arm_count()) {
    throw ContractViolation("probability buffer size differs from the arm count");
  }
  std::visit(overloaded{[&](const ThompsonGaussian& t) {
                          if (state.arm_count() != 2) {
                            throw ContractViolation(
                                "exact Thompson probabilities exist for K = 2 only; use "
                                "estimate_action_probabilities");
                          }
                          thompson_two_arm(state, t, out);
                        },
                        [&](const Ucb1&) { ucb1(state, out); },
                        [&](const Rct& r) { std::copy(r.weights.begin(), r.weights.end(), out.begin()); },
                        [&](const Clipped& c) {
                          action_probabilities_into(state, *c.inner, out);
                          const double hi = 1.0 - (static_cast<double>(out.size()) - 1.0) * c.epsilon;
                          project_onto_box_simplex(out, c.epsilon, hi);
                        }},
             spec.kind());
}

std::vector<double> action_probabilities(const PolicyState& state, const PolicySpec& spec) {
  std::vector<double> out(static_cast<std::size_t>(state.arm_count()));
  action_probabilities_into(state, spec, out);
  return out;
}

std::vector<double> estimate_action_probabilities(const PolicyState& state, const PolicySpec& spec,
                                                  RandomStream& rng, std::int64_t draws) {
  const auto* thompson = spec.get_if<ThompsonGaussian>();
  if (!thompson || state.arm_count() == 2) return action_probabilities(state, spec);
  if (draws < 1) throw ContractViolation("estimate needs at least one draw");
  std::vector<double> freq(static_cast<std::size_t>(state.arm_count()), 0.0);
  for (std::int64_t i = 0; i < draws; ++i) {
    freq[static_cast<std::size_t>(thompson_posterior_draw(state, *thompson, rng))] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(draws);
  return freq;
}

int draw_action(const PolicyState& state, const PolicySpec& spec, RandomStream& rng) {
  if (const auto* thompson = spec.get_if<ThompsonGaussian>(); thompson && state.arm_count() > 2) {
    return thompson_posterior_draw(state, *thompson, rng);
  }
  if (state.arm_count() == 2) {
    double probs[2];
    action_probabilities_into(state, spec, probs);
    return sample_index(probs, rng.uniform());
  }
  const auto probs = action_probabilities(state, spec);
  return sample_index(probs, rng.uniform());
}

}  // namespace banditlan
