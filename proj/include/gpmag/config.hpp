#pragma once

// Run configuration: one JSON file per run. Unknown keys are rejected at every
// level and the resolved configuration is echoed into each output directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gpmag/fields.hpp"
#include "gpmag/minimize.hpp"
#include "gpmag/spectral.hpp"
#include "json.hpp"

namespace gpmag {

struct InitializerConfig {
  std::string type = "constant";  // constant | random | winding
  double amplitude = 0.1;         // random perturbation size
  int winding = 0;
  double core_radius = 1.0;
};

struct SuiteConfig {
  std::string kind = "cutoff";  // cutoff | dirichlet | both
  SuiteOptions options;
};

struct ExperimentConfig {
  std::string preset;  // constant-growth | l1-energy | flux-bound
  std::vector<double> radii;    // empty: preset default
  std::vector<double> lengths;  // empty: preset default
  double strength = 1.0;
  double spacing = 0.25;
  double perturbation = 0.1;
  double core_radius = 1.0;
};

struct RunConfig {
  std::string command;
  FieldSpec field = field::Gaussian{1.0, 1.0 / std::numbers::sqrt2, {}};
  std::string field_path;  // Custom fields: base path of a scalar field file
  double halfwidth = 12.0;
  Index n = 257;
  MinimizeOptions minimizer;
  InitializerConfig initializer;
  std::vector<double> growth_radii;
  std::vector<double> profile_radii;
  std::vector<double> energy_radii;  // ball energies reported by minimize
  SuiteConfig suite;
  ExperimentConfig experiment;
  std::string output = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool quick = false;
};

/// Parses and validates; throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration, every default spelled out.
nlohmann::ordered_json to_json(const RunConfig& c);

}  // namespace gpmag
