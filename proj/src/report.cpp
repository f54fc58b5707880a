#include "banditlan/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "banditlan/csv.hpp"
#include "banditlan/errors.hpp"
#include "banditlan/oracles.hpp"
#include "banditlan/parallel.hpp"

namespace banditlan {

namespace fs = std::filesystem;

namespace {

// Collects artifacts of one run and writes the manifest last.
class RunDirectory {
 public:
  RunDirectory(std::string command, const CliOptions& options, KeyValueConfig resolved)
      : command_(std::move(command)),
        resolved_(std::move(resolved)),
        dir_(options.out / (command_ + "-" + config_hash(resolved_))),
        started_(std::chrono::steady_clock::now()) {
    if (fs::exists(dir_) && !options.force) {
      throw ConfigError("output directory " + dir_.string() + " already exists (use --force)");
    }
    fs::create_directories(dir_);
  }

  const fs::path& path() const { return dir_; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path file = dir_ / name;
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    body(out);
    out.close();
    if (!out) throw std::runtime_error("failed writing " + file.string());
    artifacts_.push_back(name);
  }

  void finish(std::uint64_t base_seed, int threads) {
    nlohmann::ordered_json manifest;
    manifest["command"] = command_;
    manifest["config"] = resolved_.entries();
    manifest["config_hash"] = config_hash(resolved_);
    manifest["artifacts"] = artifacts_;
    manifest["base_seed"] = base_seed;
    manifest["threads"] = threads;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    manifest["versions"] = {{"bandit_lan", std::string(kVersion)},
                            {"compiler", __VERSION__},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)}};
    const fs::path tmp = dir_ / "manifest.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << manifest.dump(2) << '\n';
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, dir_ / "manifest.json");
  }

 private:
  std::string command_;
  KeyValueConfig resolved_;
  fs::path dir_;
  std::chrono::steady_clock::time_point started_;
  std::vector<std::string> artifacts_;
};

std::string join_header(std::string_view prefix, int count) {
  std::string out;
  for (int k = 1; k <= count; ++k) out += "," + std::string(prefix) + std::to_string(k);
  return out;
}

RunSettings settings_for(const CliOptions& options, const KeyValueConfig& resolved) {
  RunSettings s = build_settings(resolved);
  s.study.threads = options.threads;
  return s;
}

void write_trajectories(RunDirectory& run, const StudyConfig& study) {
  for (std::size_t cell = 0; cell < study.m1_grid.size(); ++cell) {
    for (std::int64_t rep = 0; rep < study.replications; ++rep) {
      const auto traj = run_trajectory(study.experiment(cell, rep));
      run.write("trajectories/cell" + std::to_string(cell) + "_rep" + std::to_string(rep) + ".csv",
                [&](std::ostream& out) { write_trajectory_csv(out, traj); });
    }
  }
}

void write_study_tables(RunDirectory& run, const StudyConfig& study,
                        const std::vector<ReplicationRecord>& records,
                        const std::vector<CellSummary>& summaries) {
  run.write("records.csv", [&](std::ostream& out) { write_records_csv(out, study, records); });
  run.write("summary.csv", [&](std::ostream& out) { write_summary_csv(out, study, summaries); });
}

void log_summaries(std::ostream& log, const std::vector<CellSummary>& summaries) {
  for (const auto& s : summaries) {
    log << "m1=" << format_real(s.m1) << " reps=" << s.n_reps
        << " KS(tau_delta)=" << format_real(s.ks_tau_delta) << " median D2=" << s.median_d2
        << " missing=" << s.n_missing << '\n';
  }
}

}  // namespace

KeyValueConfig effective_config(const CliOptions& options) {
  KeyValueConfig cfg = options.config ? KeyValueConfig::load(*options.config) : KeyValueConfig{};
  if (options.reps) cfg.set("study.reps", std::to_string(*options.reps));
  if (options.horizon) cfg.set("study.T", std::to_string(*options.horizon));
  if (options.seed) cfg.set("study.seed", std::to_string(*options.seed));
  if (options.policy) cfg.set("policy.kind", *options.policy);
  return resolve(cfg);
}

void write_records_csv(std::ostream& out, const StudyConfig& config,
                       const std::vector<ReplicationRecord>& records) {
  const int k = config.arm_count();
  out << "policy,m1,T,rep" << join_header("D", k) << join_header("tau_mu", k)
      << ",tau_delta,exact_llr,quad_llr,residual\n";
  for (const auto& r : records) {
    out << config.policy.name() << ',' << format_real(r.m1) << ',' << config.horizon << ',' << r.rep;
    for (auto d : r.pulls) out << ',' << d;
    for (const auto& t : r.tau_mu) out << ',' << format_real(t);
    out << ',' << format_real(r.tau_delta) << ',' << format_real(r.exact_llr) << ','
        << format_real(r.quad_llr) << ',' << format_real(r.residual) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const StudyConfig& config,
                       const std::vector<CellSummary>& summaries) {
  const int k = config.arm_count();
  out << "policy,m1,T,n_reps" << join_header("ks_tau_mu", k)
      << ",ks_tau_delta,n_missing,median_D2,q25_D2,q75_D2\n";
  for (const auto& s : summaries) {
    out << config.policy.name() << ',' << format_real(s.m1) << ',' << config.horizon << ',' << s.n_reps;
    for (const auto& ks : s.ks_tau_mu) out << ',' << format_real(ks);
    out << ',' << format_real(s.ks_tau_delta) << ',' << s.n_missing << ',' << format_real(s.median_d2)
        << ',' << format_real(s.q25_d2) << ',' << format_real(s.q75_d2) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const HistogramSpec& spec,
                         const std::vector<std::int64_t>& counts) {
  out << "bin_lo,bin_hi,count\n";
  const double w = spec.bin_width();
  out << "-inf," << format_real(spec.lo) << ',' << counts.front() << '\n';
  for (int i = 0; i < spec.bins; ++i) {
    out << format_real(spec.lo + w * i) << ',' << format_real(spec.lo + w * (i + 1)) << ','
        << counts[static_cast<std::size_t>(i) + 1] << '\n';
  }
  out << format_real(spec.hi) << ",inf," << counts.back() << '\n';
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "m1,checkpoint,arm,statistic,median,q25,q75,reference\n";
  for (const auto& r : rows) {
    out << format_real(r.m1) << ',' << r.checkpoint << ',' << (r.arm + 1) << ',' << r.statistic << ','
        << format_real(r.median) << ',' << format_real(r.q25) << ',' << format_real(r.q75) << ','
        << format_real(r.reference) << '\n';
  }
}

std::string histogram_file_name(std::string_view statistic, double m1) {
  return "hist_" + std::string(statistic) + "_m1_" + format_real(m1) + ".csv";
}

fs::path command_simulate(const CliOptions& options, std::ostream& log) {
  const auto resolved = effective_config(options);
  const auto settings = settings_for(options, resolved);
  RunDirectory run("simulate", options, resolved);
  const auto records = run_study(settings.study);
  const auto summaries = summarize(settings.study, records);
  write_study_tables(run, settings.study, records, summaries);
  if (settings.dump_trajectories) write_trajectories(run, settings.study);
  log_summaries(log, summaries);
  run.finish(settings.study.base_seed, options.threads);
  return run.path();
}

fs::path command_reproduce_fig(const CliOptions& options, std::ostream& log) {
  const auto resolved = effective_config(options);
  const auto settings = settings_for(options, resolved);
  const StudyConfig& study = settings.study;
  if (study.arm_count() != 2) throw ConfigError("reproduce-fig needs K = 2");
  RunDirectory run("reproduce-fig", options, resolved);
  const auto records = run_study(study);
  const auto summaries = summarize(study, records);
  write_study_tables(run, study, records, summaries);

  const HistogramSpec pulls_spec{-0.5, static_cast<double>(study.horizon) + 0.5,
                                 static_cast<int>(study.horizon) + 1};
  for (std::size_t cell = 0; cell < study.m1_grid.size(); ++cell) {
    std::vector<double> d2;
    std::vector<std::optional<double>> mu1, mu2, delta;
    for (const auto& r : records) {
      if (r.cell != cell) continue;
      d2.push_back(static_cast<double>(r.pulls[1]));
      mu1.push_back(r.tau_mu[0]);
      mu2.push_back(r.tau_mu[1]);
      delta.push_back(r.tau_delta);
    }
    const double m1 = study.m1_grid[cell];
    run.write(histogram_file_name("D2", m1), [&](std::ostream& out) {
      write_histogram_csv(out, pulls_spec, histogram(d2, pulls_spec));
    });
    const std::pair<std::string_view, const std::vector<std::optional<double>>*> panels[] = {
        {"tau_mu1", &mu1}, {"tau_mu2", &mu2}, {"tau_delta", &delta}};
    for (const auto& [name, values] : panels) {
      run.write(histogram_file_name(name, m1), [&](std::ostream& out) {
        write_histogram_csv(out, settings.tstat_histogram, histogram(*values, settings.tstat_histogram));
      });
    }
  }
  if (settings.dump_trajectories) write_trajectories(run, study);
  log_summaries(log, summaries);
  run.finish(study.base_seed, options.threads);
  return run.path();
}

fs::path command_lan_check(const CliOptions& options, std::ostream& log) {
  const auto resolved = effective_config(options);
  const auto settings = settings_for(options, resolved);
  if (settings.horizon_ladder.empty()) throw ConfigError("config key 'lan.T_ladder' is empty");
  StudyConfig study = settings.study;
  const Eigen::Index p = study.base_theta.size();
  const Eigen::VectorXd h = study.h.value_or(Eigen::VectorXd::Ones(p));
  std::optional<std::span<const double>> constants;
  if (study.rate_constants) constants = std::span<const double>(*study.rate_constants);

  RunDirectory run("lan-check", options, resolved);
  std::ostringstream rows;
  std::ostringstream summary;
  rows << "seed,T,m1,rep,exact_llr,quad_llr,residual" << join_header("delta_", static_cast<int>(p));
  for (Eigen::Index r = 1; r <= p; ++r) {
    for (Eigen::Index c = 1; c <= p; ++c) rows << ",info_" << r << '_' << c;
  }
  rows << '\n';
  summary << "T,m1,n_reps,median_abs_residual\n";

  for (const auto horizon : settings.horizon_ladder) {
    study.horizon = horizon;
    validate(study);
    const auto reps = static_cast<std::size_t>(study.replications);
    for (std::size_t cell = 0; cell < study.m1_grid.size(); ++cell) {
      const ThetaVector theta = study.theta_for(study.m1_grid[cell]);
      std::vector<ExpansionReport> reports(reps);
      parallel_for(reps, study.threads, [&](std::size_t rep) {
        const auto traj = run_trajectory(study.experiment(cell, static_cast<std::int64_t>(rep)));
        reports[rep] = expand(traj, theta, study.arms, h, study.regime, constants);
      });
      std::vector<double> abs_residuals;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const auto& rpt = reports[rep];
        rows << study.experiment(cell, static_cast<std::int64_t>(rep)).seed << ',' << horizon << ','
             << format_real(study.m1_grid[cell]) << ',' << rep << ',' << format_real(rpt.exact_llr) << ','
             << format_real(rpt.quad_llr) << ',' << format_real(rpt.residual);
        for (Eigen::Index j = 0; j < p; ++j) rows << ',' << format_real(rpt.central_sequence[j]);
        for (Eigen::Index r = 0; r < p; ++r) {
          for (Eigen::Index c = 0; c < p; ++c) rows << ',' << format_real(rpt.info_matrix(r, c));
        }
        rows << '\n';
        abs_residuals.push_back(std::abs(rpt.residual));
      }
      const double med = median(abs_residuals);
      summary << horizon << ',' << format_real(study.m1_grid[cell]) << ',' << reps << ','
              << format_real(med) << '\n';
      log << "T=" << horizon << " m1=" << format_real(study.m1_grid[cell])
          << " median |residual|=" << format_real(med) << '\n';
    }
  }
  run.write("lan_check.csv", [&](std::ostream& out) { out << rows.str(); });
  run.write("lan_summary.csv", [&](std::ostream& out) { out << summary.str(); });
  run.finish(study.base_seed, options.threads);
  return run.path();
}

fs::path command_convergence(const CliOptions& options, std::ostream& log) {
  const auto resolved = effective_config(options);
  const auto settings = settings_for(options, resolved);
  RunDirectory run("convergence", options, resolved);
  const auto rows = convergence_diag(settings.study, settings.checkpoints);
  run.write("convergence.csv", [&](std::ostream& out) { write_convergence_csv(out, rows); });
  for (const auto& r : rows) {
    log << "m1=" << format_real(r.m1) << " T'=" << r.checkpoint << " arm " << (r.arm + 1) << ' '
        << r.statistic << " median=" << format_real(r.median)
        << (r.reference ? " reference=" + format_real(*r.reference) : std::string()) << '\n';
  }
  run.finish(settings.study.base_seed, options.threads);
  return run.path();
}

bool command_selftest(std::ostream& log) {
  bool all = true;
  for (const auto& check : oracles::run_selftest()) {
    log << (check.passed ? "PASS  " : "FAIL  ") << check.name;
    if (!check.detail.empty()) log << "  (" << check.detail << ')';
    log << '\n';
    all = all && check.passed;
  }
  return all;
}

}  // namespace banditlan
