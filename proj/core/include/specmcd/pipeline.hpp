#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specmcd/classifier.hpp"
#include "specmcd/config.hpp"
#include "specmcd/ctm.hpp"
#include "specmcd/extraction.hpp"
#include "specmcd/fusion.hpp"
#include "specmcd/tiling.hpp"

namespace specmcd {

// Everything a detection run produces, intermediates included. The manifest
// holds only values that are functions of the input; wall-clock timings stay
// in stage_seconds so identical runs serialize identically.
struct DetectResult {
  MultiScaleMaps maps;
  CtmBundle ctm;
  Grid rho_large;
  Grid rho_dense;
  Grid gradient;
  BinaryMask m_bound;
  BinaryMask m_cloud;
  Grid rho_fused;
  FusionReport fusion;
  ThresholdSet thresholds;
  std::vector<std::string> flags;
  BinaryMask m_init;
  Grid rho_dist;
  BinaryMask m_final;
  std::string manifest_json;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

DetectResult run_detect(const MultibandRaster& raster,
                        const PipelineConfig& config,
                        const Classifier& classifier);

// Writes final_mask.pgm and manifest.json into `out_dir`; with
// `emit_intermediates`, also every probability map, thickness variant and the
// initial mask.
void write_detect_outputs(const DetectResult& result,
                          const std::string& out_dir, bool emit_intermediates);

}  // namespace specmcd
