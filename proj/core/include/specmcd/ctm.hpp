#pragma once

#include "specmcd/raster.hpp"
#include "specmcd/tiling.hpp"

namespace specmcd {

// Cloud thickness map: 2*blue - 0.95*green on the raw 16-bit counts.
// Negative values are kept; normalization happens later.
Grid compute_ctm(const MultibandRaster& raster);

// Halves every pixel that strictly exceeds the scene median (lower median
// for even counts) yet lies outside the intersection of the three scene
// masks. Suppresses bright ground that no scale called cloud.
Grid refine_ctm(const Grid& ctm, const MultiScaleMaps& maps);

// Box average with an odd square window; windows are clipped at the borders
// and averaged over the pixels actually covered.
Grid mean_filter(const Grid& grid, int window);

// Best rank-k approximation (k clamped to min(k, width, height)).
Grid truncated_svd(const Grid& grid, int rank);

// Min-max rescale to [0, 1]; a constant grid maps to all zeros.
Grid normalize_grid(const Grid& grid);

// The two conditioned thickness maps the fusion stage consumes.
struct CtmBundle {
  Grid raw;      // straight from the band arithmetic
  Grid refined;  // after highlight suppression
  Grid mean;     // mean-filtered then normalized
  Grid svd;      // low-rank then normalized
};

CtmBundle build_ctm_bundle(const MultibandRaster& raster,
                           const MultiScaleMaps& maps, int mean_window,
                           int svd_rank);

}  // namespace specmcd
