// bandit_lan: simulation front end.
//
//   bandit_lan simulate       --config run.cfg --out runs
//   bandit_lan reproduce-fig  --policy thompson --reps 10000
//   bandit_lan lan-check      --config lan.cfg
//   bandit_lan convergence    --config conv.cfg
//   bandit_lan selftest
//
// Exit status: 0 success, 1 configuration error, 2 internal failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "banditlan/errors.hpp"
#include "banditlan/report.hpp"

namespace {

int default_threads() {
  if (const char* env = std::getenv("BANDIT_LAN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "ignoring invalid BANDIT_LAN_THREADS='" << env << "'\n";
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void add_run_options(CLI::App* cmd, banditlan::CliOptions& opts) {
  cmd->add_option("--config", opts.config, "key=value config file");
  cmd->add_option("--out", opts.out, "parent directory for run outputs")->capture_default_str();
  cmd->add_option("--reps", opts.reps, "replications per m1 cell (overrides study.reps)");
  cmd->add_option("--T", opts.horizon, "horizon (overrides study.T)");
  cmd->add_option("--policy", opts.policy, "thompson | ucb1 | rct | clipped (overrides policy.kind)");
  cmd->add_option("--seed", opts.seed, "base seed (overrides study.seed)");
  cmd->add_option("--threads", opts.threads, "worker threads (default: BANDIT_LAN_THREADS or all cores)");
  cmd->add_flag("--force", opts.force, "reuse an existing run directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive bandit simulations and likelihood-ratio expansion checks"};
  app.require_subcommand(1);
  banditlan::CliOptions opts;
  opts.threads = default_threads();

  auto* simulate = app.add_subcommand("simulate", "run a study and write records/summary CSVs");
  auto* fig = app.add_subcommand("reproduce-fig", "four-m1 grid with histogram CSVs");
  auto* lan = app.add_subcommand("lan-check", "expansion residuals across a horizon ladder");
  auto* conv = app.add_subcommand("convergence", "pull-rate checkpoint table");
  app.add_subcommand("selftest", "run the score/Fisher/decomposition oracle suite");
  for (auto* cmd : {simulate, fig, lan, conv}) add_run_options(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "selftest") return banditlan::command_selftest(std::cout) ? 0 : 2;
    std::filesystem::path dir;
    if (name == "simulate") dir = banditlan::command_simulate(opts, std::cout);
    if (name == "reproduce-fig") dir = banditlan::command_reproduce_fig(opts, std::cout);
    if (name == "lan-check") dir = banditlan::command_lan_check(opts, std::cout);
    if (name == "convergence") dir = banditlan::command_convergence(opts, std::cout);
    std::cout << "wrote " << dir.string() << '\n';
    return 0;
  } catch (const banditlan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const banditlan::UniqueOptimalArmViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
