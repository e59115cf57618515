#pragma once

#include "flrw/blowup.hpp"
#include "flrw/oracle.hpp"
#include "flrw/spherical.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace flrw {

using Json = nlohmann::json;

// Key-value experiment configuration with a versioned schema. One scale
// factor + initial data block, plus per-subcommand blocks.
struct ExperimentConfig {
  int schema_version = 1;
  std::uint64_t seed = 0;

  Json scale_factor;   // {"kind": "power"|"exp"|..., ...}
  Json initial_data;   // {"n", "c", "epsilon", "v0", "rho0", ...}

  Json blowup;     // optional subcommand blocks, kept as raw trees
  Json sweep;
  Json oracle;
  Json spherical;
  Json simulate;

  static ExperimentConfig parse(const Json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

ScaleFactor build_scale_factor(const Json& spec);
InitialData build_initial_data(const Json& spec);
// Same data with a different amplitude (used by sweeps).
InitialData build_initial_data(const Json& spec, double epsilon_override);

VelocityProfile build_velocity_profile(int n, const Json& spec);
DensityProfile build_density_profile(int n, const Json& spec);

BlowupSearch build_blowup_search(int n, const Json& spec);
GridConfig build_grid_config(const Json& spec);

}  // namespace flrw
