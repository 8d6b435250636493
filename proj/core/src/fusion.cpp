#include "specmcd/fusion.hpp"

#include <algorithm>
#include <cmath>

namespace specmcd {

void FusionParams::validate() const {
  const double sum = scale_weights[0] + scale_weights[1] + scale_weights[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("fusion scale weights must sum to 1");
  }
  for (double w : scale_weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw ConfigError("fusion scale weights must be non-negative");
    }
  }
  if (!(p_lo >= 0.0) || !(p_hi <= 1.0) || !(p_lo < p_hi)) {
    throw ConfigError("fusion regime bounds need 0 <= p_lo < p_hi <= 1");
  }
  if (!std::isfinite(grad_thresh) || grad_thresh < 0.0) {
    throw ConfigError("gradient threshold must be non-negative");
  }
}

std::string_view to_string(FusionRegime regime) {
  switch (regime) {
    case FusionRegime::Dense: return "dense";
    case FusionRegime::Blended: return "blended";
    case FusionRegime::Large: return "large";
  }
  return "unknown";
}

namespace {

Grid weighted_product(const Grid& a, double wa, const Grid& b, double wb,
                      const Grid& c, double wc, const Grid& gate) {
  if (!a.same_shape(b) || !a.same_shape(c) || !a.same_shape(gate)) {
    throw Error("probability fusion inputs differ in shape");
  }
  Grid out = Grid::zeros(a.width, a.height);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double blend =
        wa * a.values[i] + wb * b.values[i] + wc * c.values[i];
    out.values[i] = static_cast<float>(blend * gate.values[i]);
  }
  return out;
}

}  // namespace

Grid large_area_probability(const MultiScaleMaps& maps, const Grid& ctm_svd,
                            const FusionParams& params) {
  const auto& w = params.scale_weights;
  return weighted_product(maps.prob256, w[0], maps.prob128, w[1], maps.prob64,
                          w[2], ctm_svd);
}

Grid dense_probability(const MultiScaleMaps& maps, const Grid& ctm_mean,
                       const FusionParams& params) {
  const auto& w = params.scale_weights;
  return weighted_product(maps.prob256, w[2], maps.prob128, w[1], maps.prob64,
                          w[0], ctm_mean);
}

Grid sobel_magnitude(const Grid& grid) {
  const int w = grid.width;
  const int h = grid.height;
  Grid out = Grid::zeros(w, h);
  auto sample = [&](int r, int c) -> double {
    r = std::clamp(r, 0, h - 1);
    c = std::clamp(c, 0, w - 1);
    return grid.at(r, c);
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double tl = sample(r - 1, c - 1), tc = sample(r - 1, c),
                   tr = sample(r - 1, c + 1);
      const double ml = sample(r, c - 1), mr = sample(r, c + 1);
      const double bl = sample(r + 1, c - 1), bc = sample(r + 1, c),
                   br = sample(r + 1, c + 1);
      const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
      const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
      out.at(r, c) = static_cast<float>(std::sqrt(gx * gx + gy * gy));
    }
  }
  return out;
}

Grid sobel_gradient(const Grid& grid) {
  Grid mag = sobel_magnitude(grid);
  float lo = mag.values.empty() ? 0.0f : mag.values[0];
  float hi = lo;
  for (float v : mag.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    // A flat response carries no boundary information; report zero everywhere
    // rather than dividing by a zero span.
    std::fill(mag.values.begin(), mag.values.end(), 0.0f);
    return mag;
  }
  const double span = static_cast<double>(hi) - static_cast<double>(lo);
  for (float& v : mag.values) {
    v = static_cast<float>(255.0 * ((static_cast<double>(v) - lo) / span));
  }
  return mag;
}

BinaryMask boundary_mask(const Grid& gradient, double grad_thresh) {
  BinaryMask mask = BinaryMask::zeros(gradient.width, gradient.height);
  for (std::size_t i = 0; i < gradient.values.size(); ++i) {
    mask.values[i] = gradient.values[i] > grad_thresh ? 1 : 0;
  }
  return mask;
}

double boundary_fraction(const BinaryMask& boundary, const BinaryMask& cloud) {
  if (!boundary.same_shape(cloud)) {
    throw Error("boundary_fraction: mask shapes differ");
  }
  std::size_t cloud_count = 0;
  std::size_t joint = 0;
  for (std::size_t i = 0; i < cloud.values.size(); ++i) {
    if (cloud.values[i]) {
      ++cloud_count;
      if (boundary.values[i]) ++joint;
    }
  }
  if (cloud_count == 0) return 0.0;
  return static_cast<double>(joint) / static_cast<double>(cloud_count);
}

std::pair<Grid, FusionReport> fuse_probabilities(const Grid& dense,
                                                 const Grid& large,
                                                 double boundary_fraction,
                                                 const FusionParams& params) {
  if (!dense.same_shape(large)) {
    throw Error("fuse_probabilities: map shapes differ");
  }
  FusionReport report;
  report.boundary_fraction = boundary_fraction;

  if (boundary_fraction >= params.p_hi) {
    report.regime = FusionRegime::Dense;
    report.k = 1.0;
    return {dense, report};
  }
  if (boundary_fraction <= params.p_lo) {
    report.regime = FusionRegime::Large;
    report.k = 0.0;
    return {large, report};
  }
  report.regime = FusionRegime::Blended;
  report.k = (boundary_fraction - params.p_lo) / (params.p_hi - params.p_lo);

  Grid out = Grid::zeros(dense.width, dense.height);
  const double k = report.k;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] =
        static_cast<float>(k * dense.values[i] + (1.0 - k) * large.values[i]);
  }
  return {std::move(out), report};
}

}  // namespace specmcd
