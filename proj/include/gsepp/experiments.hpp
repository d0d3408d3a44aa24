#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsepp/mbqec.hpp"

// Declarative experiment runner behind `gsepp run`.
//
// A config is a JSON object {"experiment", "output", "seed", "params"}.
// Every parameter is checked before anything is computed; unknown keys are
// errors. Results go to the output directory as CSV series (with '#' header
// lines naming conventions), JSON reports and a manifest.json.

namespace gsepp {

/// Invalid config. `path` is the JSON location of the offending value.
struct ConfigError : std::runtime_error {
  std::string path;
  ConfigError(std::string path_, const std::string& message) : std::runtime_error(message), path(std::move(path_)) {}
  /// {"error": "config", "path": ..., "message": ...}
  nlohmann::ordered_json diagnostic() const;
};

struct ExperimentConfig {
  std::string experiment;
  std::string output;
  std::uint64_t seed = 1;
  nlohmann::json params = nlohmann::json::object();
  /// Bytes the config was parsed from; hashed into the manifest.
  std::string source;
};

std::vector<std::string> experiment_names();

/// Throws ConfigError on malformed JSON or a bad top-level field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Checks every parameter of the experiment; throws ConfigError.
void validate(const ExperimentConfig& config);

struct RunSummary {
  std::vector<std::string> files;
  int points = 0;
  /// Grid points whose computation failed; recorded in-band in the CSV.
  int failed_points = 0;
  double seconds = 0.0;
};

/// Validates, computes and writes the artifacts. `output_override`, when not
/// empty, replaces the config's output directory.
RunSummary run_experiment(const ExperimentConfig& config, const std::string& output_override = {});

/// The error-free Bell patterns of a code with their corrections, as CSV.
std::string patterns_csv(const Code& code);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

std::string version();

}  // namespace gsepp
