#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "banditlan/monte_carlo.hpp"
#include "banditlan/stats.hpp"

namespace banditlan {

/// Flat key=value text with dotted section names. '#' starts a comment;
/// blank lines are ignored; surrounding whitespace is trimmed.
///
///   policy.kind = thompson
///   study.T     = 500
///   study.m1    = 2, 10, 50, 75
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

/// Every recognized key with its default; an empty default means "unset".
const std::vector<ConfigKey>& config_schema();

/// Returns the config with every schema key present, defaults filled in.
/// Throws ConfigError naming the first unknown key.
KeyValueConfig resolve(const KeyValueConfig& config);

/// 16 hex digits of FNV-1a over the resolved "key=value\n" lines.
std::string config_hash(const KeyValueConfig& resolved);

struct RunSettings {
  StudyConfig study;
  std::vector<std::int64_t> checkpoints{};
  std::vector<std::int64_t> horizon_ladder{};
  HistogramSpec tstat_histogram{};
  bool dump_trajectories = false;
};

/// Builds typed settings from a resolved config. Throws ConfigError on any
/// malformed or out-of-range value.
RunSettings build_settings(const KeyValueConfig& resolved);

std::vector<double> parse_real_list(std::string_view text);

}  // namespace banditlan
