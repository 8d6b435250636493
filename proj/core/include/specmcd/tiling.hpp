#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "specmcd/classifier.hpp"
#include "specmcd/raster.hpp"

namespace specmcd {

// Window scales used by the scene pass, coarse to fine.
inline constexpr std::array<int, 3> kWindowScales{256, 128, 64};

struct WindowSpec {
  int scale = 0;
  int row = 0;  // top-left corner
  int col = 0;
};

// Sliding windows at stride scale/2. When the last regular window along an
// axis stops short of the raster edge, one extra edge-flush window is added
// so coverage is total. Throws if the raster cannot hold a single window.
std::vector<WindowSpec> enumerate_windows(int width, int height, int scale);

// Cuts the window out of the raster and divides every band by the maximum
// sample over all bands in the block. An all-zero block stays all zero.
Block normalize_block(const MultibandRaster& raster, const WindowSpec& window);

// Nearest-neighbor replication up to kClassifierEdge. The window scale must
// divide the classifier edge exactly.
Block upscale_block(const Block& block);

// Paints each window's score over its footprint, keeping the pixelwise
// maximum where footprints overlap. Window order does not matter.
Grid assemble_scale_map(int width, int height,
                        std::span<const WindowSpec> windows,
                        std::span<const float> scores);

// Classifies every window at one scale and assembles the probability map
// plus its thresholded scene mask (score strictly above mask_threshold).
// workers > 1 classifies windows from a thread pool; results are identical
// to the single-threaded run.
std::pair<Grid, BinaryMask> build_scale_map(const MultibandRaster& raster,
                                            const Classifier& classifier,
                                            int scale, double mask_threshold,
                                            int workers = 1);

struct MultiScaleMaps {
  Grid prob256, prob128, prob64;
  BinaryMask mask256, mask128, mask64;
};

MultiScaleMaps multiscale_maps(const MultibandRaster& raster,
                               const Classifier& classifier,
                               double mask_threshold, int workers = 1);

}  // namespace specmcd
