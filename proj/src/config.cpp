#include "flrw/config.hpp"

#include <fstream>

namespace flrw {

namespace {
double get_num(const Json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("config: missing numeric field '") + key + "'");
  }
  if (!j.at(key).is_number())
    throw ConfigError(std::string("config: field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string get_str(const Json& j, const char* key, const char* fallback = nullptr) {
  if (!j.contains(key)) {
    if (fallback) return fallback;
    throw ConfigError(std::string("config: missing string field '") + key + "'");
  }
  if (!j.at(key).is_string())
    throw ConfigError(std::string("config: field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}
}  // namespace

ExperimentConfig ExperimentConfig::parse(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig cfg;
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer())
    throw ConfigError("config: missing integer field 'schema_version'");
  cfg.schema_version = j.at("schema_version").get<int>();
  if (cfg.schema_version != 1)
    throw ConfigError("config: unsupported schema_version " +
                      std::to_string(cfg.schema_version));
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("scale_factor")) throw ConfigError("config: missing 'scale_factor'");
  if (!j.contains("initial_data")) throw ConfigError("config: missing 'initial_data'");
  cfg.scale_factor = j.at("scale_factor");
  cfg.initial_data = j.at("initial_data");
  for (const char* key : {"blowup", "sweep", "oracle", "spherical", "simulate"}) {
    if (j.contains(key)) {
      if (key == std::string("blowup")) cfg.blowup = j.at(key);
      else if (key == std::string("sweep")) cfg.sweep = j.at(key);
      else if (key == std::string("oracle")) cfg.oracle = j.at(key);
      else if (key == std::string("spherical")) cfg.spherical = j.at(key);
      else cfg.simulate = j.at(key);
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse(j);
}

ScaleFactor build_scale_factor(const Json& spec) {
  const std::string kind = get_str(spec, "kind");
  if (kind == "power") return ScaleFactor::power_law(get_num(spec, "l"));
  if (kind == "exp") return ScaleFactor::exponential(get_num(spec, "H"));
  throw ConfigError("config: scale_factor.kind must be 'power' or 'exp'");
}

VelocityProfile build_velocity_profile(int n, const Json& spec) {
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "zero") return profiles::zero(n);
    if (name == "arctan") return profiles::arctan(n);
    if (name == "gaussian") return profiles::gaussian(n);
    if (name == "sine") return profiles::sine(n);
    throw ConfigError("config: unknown v0 profile '" + name + "'");
  }
  const std::string name = get_str(spec, "profile");
  if (name == "zero") return profiles::zero(n);
  if (name == "linear") return profiles::linear(n, get_num(spec, "slope", 1.0));
  if (name == "arctan")
    return profiles::arctan(n, get_num(spec, "delta", 0.0), get_num(spec, "amplitude", 1.0),
                            get_num(spec, "width", 1.0));
  if (name == "gaussian") return profiles::gaussian(n, get_num(spec, "amplitude", 1.0));
  if (name == "sine") return profiles::sine(n, get_num(spec, "amplitude", 1.0));
  throw ConfigError("config: unknown v0 profile '" + name + "'");
}

DensityProfile build_density_profile(int n, const Json& spec) {
  if (spec.is_string()) {
    const std::string name = spec.get<std::string>();
    if (name == "constant") return profiles::constant_density(n);
    if (name == "gaussian") return profiles::gaussian_density(n);
    throw ConfigError("config: unknown rho0 profile '" + name + "'");
  }
  const std::string name = get_str(spec, "profile");
  if (name == "constant") return profiles::constant_density(n, get_num(spec, "value", 1.0));
  if (name == "gaussian") return profiles::gaussian_density(n, get_num(spec, "floor", 0.0));
  throw ConfigError("config: unknown rho0 profile '" + name + "'");
}

InitialData build_initial_data(const Json& spec) {
  return build_initial_data(spec, get_num(spec, "epsilon"));
}

InitialData build_initial_data(const Json& spec, double epsilon_override) {
  const int n = static_cast<int>(get_num(spec, "n", 1.0));
  const double c = get_num(spec, "c", 1.0);
  if (!spec.contains("v0")) throw ConfigError("config: initial_data needs 'v0'");
  if (!spec.contains("rho0")) throw ConfigError("config: initial_data needs 'rho0'");
  std::optional<double> N0, Q0;
  if (spec.contains("N0")) N0 = get_num(spec, "N0");
  if (spec.contains("Q0")) Q0 = get_num(spec, "Q0");
  std::optional<double> eps_max;
  if (spec.contains("eps_max")) eps_max = get_num(spec, "eps_max");
  return InitialData(n, c, epsilon_override, build_velocity_profile(n, spec.at("v0")),
                     build_density_profile(n, spec.at("rho0")), N0, Q0,
                     get_num(spec, "sample_box", 5.0), eps_max);
}

BlowupSearch build_blowup_search(int n, const Json& spec) {
  BlowupSearch s;
  if (spec.is_null()) return s;
  s.t_max = get_num(spec, "t_max", s.t_max);
  s.grid = static_cast<int>(get_num(spec, "grid", s.grid));
  s.t_samples = static_cast<int>(get_num(spec, "t_samples", s.t_samples));
  auto read_box = [&](const char* key, double fallback) {
    Vec v = Vec::Constant(n, fallback);
    if (spec.contains(key)) {
      const Json& arr = spec.at(key);
      if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        throw ConfigError(std::string("config: '") + key + "' must be an array of length n");
      for (int d = 0; d < n; ++d) v[d] = arr.at(d).get<double>();
    }
    return v;
  };
  s.alpha_lo = read_box("alpha_lo", -5.0);
  s.alpha_hi = read_box("alpha_hi", 5.0);
  return s;
}

GridConfig build_grid_config(const Json& spec) {
  GridConfig g;
  if (spec.is_null()) return g;
  g.N = static_cast<int>(get_num(spec, "N", g.N));
  g.x_lo = get_num(spec, "x_lo", g.x_lo);
  g.x_hi = get_num(spec, "x_hi", g.x_hi);
  g.cfl = get_num(spec, "cfl", g.cfl);
  g.t_end = get_num(spec, "t_end", g.t_end);
  g.snapshots = static_cast<int>(get_num(spec, "snapshots", g.snapshots));
  g.ambient_n = static_cast<int>(get_num(spec, "ambient_n", g.ambient_n));
  g.monitor_factor = get_num(spec, "monitor_factor", g.monitor_factor);
  const std::string recon = get_str(spec, "reconstruction", "none");
  if (recon == "none") g.recon = GridConfig::Recon::none;
  else if (recon == "minmod") g.recon = GridConfig::Recon::minmod;
  else throw ConfigError("config: reconstruction must be 'none' or 'minmod'");
  return g;
}

}  // namespace flrw
