#include "banditlan/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "banditlan/errors.hpp"

namespace banditlan {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("config key '" + std::string(key) + "': '" + std::string(text) +
                      "' is not a finite number");
  }
  return value;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("config key '" + std::string(key) + "': '" + std::string(text) +
                      "' is not an integer");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': expected true or false");
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  text = trim(text);
  if (text.empty()) return items;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    items.push_back(trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<double> real_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::int64_t> int_list(std::string_view key, std::string_view text) {
  std::vector<std::int64_t> out;
  for (auto item : split_list(text)) out.push_back(parse_int<std::int64_t>(key, item));
  return out;
}

PolicySpec parse_simple_policy(std::string_view kind, const KeyValueConfig& cfg, int arm_count) {
  if (kind == "thompson") {
    return ThompsonGaussian{parse_real("thompson.prior_var", *cfg.get("thompson.prior_var")),
                            parse_real("thompson.assumed_var", *cfg.get("thompson.assumed_var"))};
  }
  if (kind == "ucb1") return Ucb1{};
  if (kind == "rct") {
    auto weights = real_list("rct.weights", *cfg.get("rct.weights"));
    if (weights.empty()) weights.assign(static_cast<std::size_t>(arm_count), 1.0 / arm_count);
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w > 0.0); })) {
      throw ConfigError("config key 'rct.weights': weights must be strictly positive");
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("config key 'rct.weights': weights must sum to 1");
    for (double& w : weights) w /= total;
    return Rct{std::move(weights)};
  }
  throw ConfigError("unknown policy '" + std::string(kind) + "'");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
      }
      const auto key = trim(line.substr(0, eq));
      if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
      cfg.set(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"arms.K", "2", "number of arms"},
      {"arms.family", "logistic_unit_var", "gaussian | logistic_unit_var"},
      {"arms.sigma2", "1", "reward variance of the gaussian family"},
      {"policy.kind", "thompson", "thompson | ucb1 | rct | clipped"},
      {"thompson.prior_var", "1", "prior variance of each arm mean"},
      {"thompson.assumed_var", "1", "reward variance assumed by the posterior"},
      {"rct.weights", "", "sampling weights; uniform when unset"},
      {"clipped.epsilon", "0.05", "lower probability bound, in (0, 1/K)"},
      {"clipped.inner", "thompson", "thompson | ucb1 | rct"},
      {"study.T", "500", "horizon"},
      {"study.reps", "10000", "replications per m1 cell"},
      {"study.seed", "1", "base seed"},
      {"study.m1", "2,10,50,75", "grid of first-arm mean offsets"},
      {"study.m1_scaling", "sqrt_T", "sqrt_T (mu1 = m1/sqrt(T)) | none (mu1 = m1)"},
      {"study.theta", "", "base parameter; zeros when unset"},
      {"study.regime", "case_b", "case_b (s_T = log T) | case_b_star (s_T = T)"},
      {"study.h", "", "local alternative for likelihood-ratio tracking"},
      {"study.rate_constants", "empirical", "empirical | list of C_k for case_b_star"},
      {"study.checkpoints", "", "convergence checkpoints; powers of ten up to T when unset"},
      {"lan.T_ladder", "200,2000,20000", "horizons for lan-check"},
      {"output.trajectories", "false", "write one trajectory CSV per replication"},
      {"output.hist_lo", "-6", "t-statistic histogram lower edge"},
      {"output.hist_hi", "6", "t-statistic histogram upper edge"},
      {"output.hist_bins", "121", "t-statistic histogram bin count"},
  };
  return schema;
}

KeyValueConfig resolve(const KeyValueConfig& config) {
  const auto& schema = config_schema();
  for (const auto& [key, value] : config.entries()) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ConfigKey& k) { return k.name == key; });
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  KeyValueConfig resolved;
  for (const auto& k : schema) {
    resolved.set(std::string(k.name), config.get(std::string(k.name)).value_or(std::string(k.default_value)));
  }
  return resolved;
}

std::string config_hash(const KeyValueConfig& resolved) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [key, value] : resolved.entries()) {
    for (const std::string* part : {&key, &value}) {
      for (unsigned char c : *part) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
      h ^= static_cast<unsigned char>(part == &key ? '=' : '\n');
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> parse_real_list(std::string_view text) { return real_list("list", text); }

RunSettings build_settings(const KeyValueConfig& cfg) {
  auto get = [&](const char* key) { return *cfg.get(key); };

  const int k = parse_int<int>("arms.K", get("arms.K"));
  if (k < 2) throw ConfigError("config key 'arms.K': a bandit needs at least two arms");
  const ArmFamily family = parse_family(trim(get("arms.family")));
  const double sigma2 = parse_real("arms.sigma2", get("arms.sigma2"));
  if (!(sigma2 > 0.0)) throw ConfigError("config key 'arms.sigma2': must be positive");

  const auto kind = std::string(trim(get("policy.kind")));
  std::optional<PolicySpec> policy;
  if (kind == "clipped") {
    const auto inner = std::string(trim(get("clipped.inner")));
    if (inner == "clipped") throw ConfigError("config key 'clipped.inner': cannot be clipped");
    policy = clipped(parse_simple_policy(inner, cfg, k), parse_real("clipped.epsilon", get("clipped.epsilon")));
  } else {
    policy = parse_simple_policy(kind, cfg, k);
  }

  auto theta_values = real_list("study.theta", get("study.theta"));
  if (theta_values.empty()) theta_values.assign(static_cast<std::size_t>(k), 0.0);
  if (static_cast<int>(theta_values.size()) != k) {
    throw ConfigError("config key 'study.theta': needs one component per arm (location model)");
  }
  Eigen::VectorXd theta = Eigen::Map<Eigen::VectorXd>(theta_values.data(), k);

  RunSettings s{.study = StudyConfig{.base_theta = ThetaVector(theta),
                                    .arms = location_model(family, k, sigma2),
                                    .policy = *policy}};
  StudyConfig& study = s.study;
  study.horizon = parse_int<std::int64_t>("study.T", get("study.T"));
  study.replications = parse_int<std::int64_t>("study.reps", get("study.reps"));
  study.base_seed = parse_int<std::uint64_t>("study.seed", get("study.seed"));
  study.m1_grid = real_list("study.m1", get("study.m1"));
  const auto scaling = trim(get("study.m1_scaling"));
  if (scaling == "sqrt_T") {
    study.gap_scaling = GapScaling::root_horizon;
  } else if (scaling == "none") {
    study.gap_scaling = GapScaling::none;
  } else {
    throw ConfigError("config key 'study.m1_scaling': expected sqrt_T or none");
  }
  study.regime = parse_regime(trim(get("study.regime")));
  if (auto h = real_list("study.h", get("study.h")); !h.empty()) {
    study.h = Eigen::Map<Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  }
  if (const auto rc = trim(get("study.rate_constants")); rc != "empirical") {
    study.rate_constants = real_list("study.rate_constants", rc);
  }

  s.checkpoints = int_list("study.checkpoints", get("study.checkpoints"));
  if (s.checkpoints.empty()) {
    for (std::int64_t c = 10; c < study.horizon; c *= 10) s.checkpoints.push_back(c);
    s.checkpoints.push_back(study.horizon);
  }
  s.horizon_ladder = int_list("lan.T_ladder", get("lan.T_ladder"));
  s.tstat_histogram = HistogramSpec{parse_real("output.hist_lo", get("output.hist_lo")),
                                    parse_real("output.hist_hi", get("output.hist_hi")),
                                    parse_int<int>("output.hist_bins", get("output.hist_bins"))};
  if (!(s.tstat_histogram.lo < s.tstat_histogram.hi) || s.tstat_histogram.bins < 1) {
    throw ConfigError("config keys 'output.hist_*': need lo < hi and bins >= 1");
  }
  s.dump_trajectories = parse_bool("output.trajectories", get("output.trajectories"));
  validate(study);
  return s;
}

}  // namespace banditlan
