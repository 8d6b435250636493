#pragma once

#include <array>
#include <string_view>
#include <utility>

#include "specmcd/raster.hpp"
#include "specmcd/tiling.hpp"

namespace specmcd {

// Knobs for the probability-fusion stage. scale_weights order the three
// window scales by trust: the large-area map applies them coarse to fine,
// the dense map fine to coarse.
struct FusionParams {
  std::array<double, 3> scale_weights{0.5, 0.4, 0.1};
  double grad_thresh = 19.0;  // on the [0, 255] gradient scale
  double p_hi = 0.2;          // boundary fraction at or above which the scene is dense
  double p_lo = 0.1;          // at or below which the scene is large-area

  void validate() const;
};

enum class FusionRegime { Dense, Blended, Large };
std::string_view to_string(FusionRegime regime);

struct FusionReport {
  double boundary_fraction = 0.0;  // P
  double k = 0.0;                  // blend weight toward the dense map
  FusionRegime regime = FusionRegime::Large;
};

// weights[0]*p256 + weights[1]*p128 + weights[2]*p64, gated by the low-rank
// thickness map.
Grid large_area_probability(const MultiScaleMaps& maps, const Grid& ctm_svd,
                            const FusionParams& params);

// Same blend with the weights reversed, gated by the mean-filtered map.
Grid dense_probability(const MultiScaleMaps& maps, const Grid& ctm_mean,
                       const FusionParams& params);

// Raw Sobel magnitude sqrt(gx^2 + gy^2) with edge-replicated borders.
Grid sobel_magnitude(const Grid& grid);

// Magnitude min-max scaled onto [0, 255]; a constant input maps to zeros.
Grid sobel_gradient(const Grid& grid);

// Pixels whose scaled gradient strictly exceeds the threshold.
BinaryMask boundary_mask(const Grid& gradient, double grad_thresh);

// Share of the cloud-region pixels that are boundary pixels; 0 when the
// cloud region is empty.
double boundary_fraction(const BinaryMask& boundary, const BinaryMask& cloud);

// Picks or blends the two probability maps from the boundary fraction.
std::pair<Grid, FusionReport> fuse_probabilities(const Grid& dense,
                                                 const Grid& large,
                                                 double boundary_fraction,
                                                 const FusionParams& params);

}  // namespace specmcd
