#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "banditlan/config.hpp"
#include "banditlan/monte_carlo.hpp"

namespace banditlan {

inline constexpr std::string_view kVersion = "0.1.0";

struct CliOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "runs";
  std::optional<std::int64_t> reps;
  std::optional<std::int64_t> horizon;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool force = false;
};

/// Config file contents with command-line overrides applied, then resolved.
KeyValueConfig effective_config(const CliOptions& options);

// CSV writers. Reals use format_real; missing values are empty fields.
void write_records_csv(std::ostream& out, const StudyConfig& config,
                       const std::vector<ReplicationRecord>& records);
void write_summary_csv(std::ostream& out, const StudyConfig& config,
                       const std::vector<CellSummary>& summaries);
void write_histogram_csv(std::ostream& out, const HistogramSpec& spec,
                         const std::vector<std::int64_t>& counts);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Subcommand entry points. Each writes its artifacts under
/// out/<command>-<config hash>/ followed by manifest.json, and returns the
/// run directory. Errors are thrown (ConfigError and friends).
std::filesystem::path command_simulate(const CliOptions& options, std::ostream& log);
std::filesystem::path command_reproduce_fig(const CliOptions& options, std::ostream& log);
std::filesystem::path command_lan_check(const CliOptions& options, std::ostream& log);
std::filesystem::path command_convergence(const CliOptions& options, std::ostream& log);
/// Returns true when every oracle check passes.
bool command_selftest(std::ostream& log);

/// Histogram file name for one statistic in one m1 cell, e.g.
/// "hist_tau_delta_m1_50.csv". Statistics: D2, tau_mu1, tau_mu2, tau_delta.
std::string histogram_file_name(std::string_view statistic, double m1);

}  // namespace banditlan
