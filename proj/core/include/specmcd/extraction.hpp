#pragma once

#include <utility>
#include <vector>

#include "specmcd/fusion.hpp"
#include "specmcd/raster.hpp"
#include "specmcd/tiling.hpp"

namespace specmcd {

// Thresholds driving the initial and final mask decisions, plus the
// intermediate statistics the run manifest reports.
struct ThresholdSet {
  double mu_dense = 0.0;
  double mu_large = 0.0;
  double mu_final = 0.0;
  double rho_mean = 0.0;
  double dist_max = 0.0;
};

// Mean fused probability over the coarse scene mask. An empty mask means no
// window anywhere scored as cloudy; the threshold degenerates to 1.0 so the
// initial mask stays empty, and the flag records that this happened.
double dense_threshold(const Grid& fused, const BinaryMask& mask256,
                       std::vector<std::string>& flags);

// Mean fused probability over pixels where the coarse and fine scene masks
// disagree. That band hugs cloud boundaries on scenes with large contiguous
// cover. When the masks agree everywhere there is no band to average over,
// so the dense estimate stands in for it.
double large_threshold(const Grid& fused, const BinaryMask& mask256,
                       const BinaryMask& mask64, double mu_dense,
                       std::vector<std::string>& flags);

// Mixes the two threshold estimates with the same regime weight used for the
// probability maps, so threshold selection tracks the fusion decision.
ThresholdSet select_thresholds(const Grid& fused, const MultiScaleMaps& maps,
                               const FusionReport& report,
                               std::vector<std::string>& flags);

BinaryMask initial_mask(const Grid& fused, double mu_final);

// Exact Euclidean distance transform: each pixel gets the distance to the
// nearest true pixel of `mask`. An all-false mask returns width+height
// everywhere, an upper bound no real distance inside the frame can reach.
Grid euclidean_distance_transform(const BinaryMask& mask);

// Mean fused probability over the mid-scale scene mask, used to top up
// pixels near the initial mask. Empty mask contributes nothing.
double compensation_probability(const Grid& fused, const BinaryMask& mask128,
                                std::vector<std::string>& flags);

// How far from the initial mask the compensation is allowed to reach. Dense
// boundary evidence shrinks the reach; the result is pinned to [50, 100].
double max_expand_distance(double boundary_fraction);

// Raises fused probabilities within `dist_max` of the initial mask, tapering
// linearly with distance and saturating at 1. Pixels inside the mask or
// beyond the reach keep their fused value.
Grid distance_weighted_probability(const Grid& fused, const Grid& distance,
                                   double dist_max, double rho_mean);

BinaryMask final_mask(const Grid& weighted, double mu_final);

}  // namespace specmcd
