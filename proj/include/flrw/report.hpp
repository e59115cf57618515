#pragma once

#include "flrw/config.hpp"

#include <filesystem>

namespace flrw {

// Deterministic number formatting shared by all emitters.
std::string format_num(double x);

// Writes through a temp file + rename so failures leave no partial artifact.
void atomic_write(const std::filesystem::path& path, const std::string& content);

Json blowup_report_json(const BlowupReport& report);

struct RunContext {
  std::filesystem::path out_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct SweepRow {
  double epsilon = 0.0;
  std::optional<double> t_blow;
  double analytic_bound = 0.0;
  std::string regime;
  std::string status = "ok";
};

// One blowup search per amplitude; failures are recorded per row and the
// sweep continues. Deterministic for a fixed config regardless of jobs.
std::vector<SweepRow> sweep_lifespan(const ExperimentConfig& cfg,
                                     const std::vector<double>& epsilons, int jobs);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Subcommand runners; each writes its artifacts atomically under out_dir and
// returns a process exit code (0 ok; config errors and numeric errors are
// thrown and mapped by the caller).
int run_blowup(const ExperimentConfig& cfg, const RunContext& ctx);
int run_sweep(const ExperimentConfig& cfg, const RunContext& ctx);
int run_simulate(const ExperimentConfig& cfg, const RunContext& ctx);
int run_oracle_compare(const ExperimentConfig& cfg, const RunContext& ctx);
int run_spherical(const ExperimentConfig& cfg, const RunContext& ctx);
int run_thresholds(const ExperimentConfig& cfg, const RunContext& ctx);

}  // namespace flrw
