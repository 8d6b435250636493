#pragma once

#include <string>

#include "specmcd/fusion.hpp"

namespace specmcd {

// Every tunable constant in the detection pipeline, with the defaults the
// rest of the project is calibrated against. A config file may override any
// subset; unknown keys are rejected rather than ignored.
struct PipelineConfig {
  FusionParams fusion;
  int mean_filter_window = 29;
  int svd_rank = 70;
  double scene_score_threshold = 0.5;
  double mock_saturation = 1.0;
  int workers = 1;
  double worker_timeout_seconds = 30.0;

  void validate() const;

  // Serializes the merged configuration; this is what the run manifest
  // embeds, so a run can be reproduced from its manifest alone.
  std::string to_json() const;
};

// Parses a JSON object with any subset of the config keys. Throws
// ConfigError on unknown keys, wrong types, or out-of-range values.
PipelineConfig parse_config(const std::string& json_text);

// Reads and parses a config file.
PipelineConfig load_config(const std::string& path);

}  // namespace specmcd
