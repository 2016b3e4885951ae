#pragma once

// Scenario files: one JSON document per scenario, mirroring EnsembleSpec plus
// the output and scan options used by the command-line tool.

#include <string>
#include <vector>

#include "json.hpp"

#include "retrobell/analysis.hpp"
#include "retrobell/ensemble.hpp"

namespace retrobell {

inline constexpr int kConfigSchemaVersion = 1;

struct ScanConfig {
  enum class Mode { bell_curve, signal };
  Mode mode = Mode::bell_curve;
  int points = 37;
  std::vector<UnitVector3> probes;
  int bootstrap_resamples = 1000;

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

struct ScenarioConfig {
  EnsembleSpec spec;
  std::string state_name = "singlet";  ///< preset name, or "custom"
  double bin_width = 0.25;
  ScanConfig scan;
  SettingQuad chsh = standard_chsh_settings();

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses a scenario document. Throws ConfigError naming the line/column of a
/// syntax error or the JSON path of an invalid field. The seed is mandatory.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a file; I/O failures throw std::ios_base::failure.
ScenarioConfig load_config(const std::string& path);

nlohmann::ordered_json to_json(const ScenarioConfig& config);

}  // namespace retrobell
