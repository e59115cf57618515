// Batch front door: characteristic-solution experiments for pressureless
// relativistic flows on expanding backgrounds. Subcommands dispatch on a
// JSON config and write CSV/JSON artifacts atomically.

#include "flrw/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int dispatch(const std::string& command, const flrw::ExperimentConfig& cfg,
             const flrw::RunContext& ctx) {
  if (command == "simulate") return flrw::run_simulate(cfg, ctx);
  if (command == "sweep") return flrw::run_sweep(cfg, ctx);
  if (command == "blowup") return flrw::run_blowup(cfg, ctx);
  if (command == "oracle-compare") return flrw::run_oracle_compare(cfg, ctx);
  if (command == "spherical") return flrw::run_spherical(cfg, ctx);
  if (command == "thresholds") return flrw::run_thresholds(cfg, ctx);
  throw flrw::ConfigError("unknown subcommand '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"characteristic-method experiments for relativistic dust on expanding backgrounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("FLRW_DUST_OUT")) out_dir = env;

  for (const char* name :
       {"simulate", "sweep", "blowup", "oracle-compare", "spherical", "thresholds"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "parallel workers");
    sub->add_option("--seed", seed, "seed for randomized sampling");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  if (out_dir.empty()) out_dir = "out";

  try {
    flrw::ExperimentConfig cfg = flrw::ExperimentConfig::load(config_path);
    if (cfg.seed == 0) cfg.seed = seed;
    flrw::RunContext ctx{out_dir, std::max(1, jobs), cfg.seed};
    return dispatch(command, cfg, ctx);
  } catch (const flrw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
