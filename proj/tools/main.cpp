#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "diqkd/commands.hpp"
#include "diqkd/run_config.hpp"

namespace {

bool log_enabled() {
  const char* level = std::getenv("DIQKD_LOG");
  return level != nullptr && std::string(level) != "quiet" && std::string(level) != "";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[diqkd] " << msg << "\n";
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> eta_source;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* c = cmd->add_option("--config", flags.config_path, "JSON config file");
  if (config_required) c->required();
  cmd->add_option("--seed", flags.seed, "session seed (overrides the config)");
  cmd->add_option("--out", flags.out, "output path (overrides the config)");
  cmd->add_option("--eta-source", flags.eta_source,
                  "efficiency used in the zeta term: tol or observed")
      ->check(CLI::IsMember({"tol", "observed"}));
}

diqkd::RunConfig load(const CommonFlags& flags) {
  diqkd::RunConfig cfg = diqkd::load_run_config(flags.config_path);
  if (flags.seed) {
    cfg.seed = *flags.seed;
    cfg.seed_set = true;
  }
  if (flags.out) cfg.out_path = *flags.out;
  if (flags.eta_source) {
    cfg.eta_source = *flags.eta_source == "observed"
                         ? diqkd::security::EtaSource::Observed
                         : diqkd::security::EtaSource::Tolerated;
  }
  log_line("loaded " + flags.config_path);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-key calculator and round-level simulator for "
               "relay-based device-independent QKD with a local CHSH test"};
  app.require_subcommand(1);

  CommonFlags rate_flags, sweep_flags, sim_flags;
  bool optimize_budget = false;
  std::string grid_text;
  std::int64_t trials = 100000;
  std::uint64_t vb_seed = 0;

  CLI::App* rate = app.add_subcommand("rate", "key length for the configured tolerances");
  add_common(rate, rate_flags, true);
  rate->add_flag("--optimize-budget", optimize_budget,
                 "search secrecy budget splits instead of the uniform one");

  CLI::App* sweep = app.add_subcommand("sweep", "key rates across an eta_tol grid (CSV)");
  add_common(sweep, sweep_flags, true);
  sweep->add_option("--grid", grid_text, "eta_tol grid as start:stop:steps")->required();

  CLI::App* sim = app.add_subcommand("simulate", "run the protocol round by round");
  add_common(sim, sim_flags, true);

  CLI::App* verify = app.add_subcommand("verify-bounds",
                                        "Monte Carlo checks of the tail bounds "
                                        "and hash two-universality");
  verify->add_option("--trials", trials, "trials per check (default 100000)");
  verify->add_option("--seed", vb_seed, "seed for the checks (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : diqkd::cli::kExitUsage;
  }

  try {
    if (rate->parsed()) {
      diqkd::RunConfig cfg = load(rate_flags);
      if (optimize_budget) cfg.budget = diqkd::BudgetMode::Optimize;
      return diqkd::cli::cmd_rate(cfg, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
      diqkd::RunConfig cfg = load(sweep_flags);
      diqkd::cli::GridSpec gs = diqkd::cli::parse_grid(grid_text);
      return diqkd::cli::cmd_sweep(cfg, gs, std::cout, std::cerr);
    }
    if (sim->parsed()) {
      diqkd::RunConfig cfg = load(sim_flags);
      return diqkd::cli::cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (verify->parsed()) {
      return diqkd::cli::cmd_verify_bounds(trials, vb_seed, std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return diqkd::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return diqkd::cli::kExitUsage;
  }
  return diqkd::cli::kExitUsage;
}
