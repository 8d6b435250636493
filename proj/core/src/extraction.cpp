#include "specmcd/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specmcd {

namespace {

// Mean of `grid` over the true pixels of `mask`. Returns false when the mask
// is empty so callers can apply their own fallback.
bool masked_mean(const Grid& grid, const BinaryMask& mask, double& out) {
  if (grid.width != mask.width || grid.height != mask.height) {
    throw Error("masked mean: grid and mask shapes differ");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask.values.size(); ++i) {
    if (mask.values[i]) {
      sum += grid.values[i];
      ++count;
    }
  }
  if (count == 0) return false;
  out = sum / static_cast<double>(count);
  return true;
}

}  // namespace

double dense_threshold(const Grid& fused, const BinaryMask& mask256,
                       std::vector<std::string>& flags) {
  double mean = 0.0;
  if (!masked_mean(fused, mask256, mean)) {
    // No window anywhere voted cloudy at the coarse scale. A threshold of 1
    // keeps the initial mask empty instead of guessing.
    flags.push_back("mu-dense-defaulted-empty-scene-mask");
    return 1.0;
  }
  return mean;
}

double large_threshold(const Grid& fused, const BinaryMask& mask256,
                       const BinaryMask& mask64, double mu_dense,
                       std::vector<std::string>& flags) {
  const BinaryMask band = mask_difference_sym(mask256, mask64);
  double mean = 0.0;
  if (!masked_mean(fused, band, mean)) {
    flags.push_back("mu-large-fell-back-to-mu-dense");
    return mu_dense;
  }
  return mean;
}

ThresholdSet select_thresholds(const Grid& fused, const MultiScaleMaps& maps,
                               const FusionReport& report,
                               std::vector<std::string>& flags) {
  ThresholdSet t;
  t.mu_dense = dense_threshold(fused, maps.mask256, flags);
  t.mu_large =
      large_threshold(fused, maps.mask256, maps.mask64, t.mu_dense, flags);
  // report.k is 1 in the dense regime and 0 in the large regime, so the
  // blend below reproduces the pure branches exactly.
  t.mu_final = report.k * t.mu_dense + (1.0 - report.k) * t.mu_large;
  t.rho_mean = compensation_probability(fused, maps.mask128, flags);
  t.dist_max = max_expand_distance(report.boundary_fraction);
  return t;
}

BinaryMask initial_mask(const Grid& fused, double mu_final) {
  BinaryMask mask = BinaryMask::zeros(fused.width, fused.height);
  for (std::size_t i = 0; i < fused.values.size(); ++i) {
    mask.values[i] = fused.values[i] > mu_final ? 1 : 0;
  }
  return mask;
}

namespace {

// Large enough to dominate any squared pixel distance, small enough that
// adding offsets to it stays exact in double arithmetic.
constexpr double kFar = 1e20;

// One-dimensional squared-distance transform over the lower envelope of the
// parabolas rooted at each source sample (Felzenszwalb and Huttenlocher).
void squared_dt_1d(const double* f, int n, std::vector<int>& v,
                   std::vector<double>& z, double* out) {
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + static_cast<double>(q) * q) -
                (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
               (2.0 * (q - v[k]));
    while (s <= z[k]) {
      --k;
      s = ((f[q] + static_cast<double>(q) * q) -
           (f[v[k]] + static_cast<double>(v[k]) * v[k])) /
          (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

}  // namespace

Grid euclidean_distance_transform(const BinaryMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  Grid out = Grid::zeros(w, h);

  if (mask.count_true() == 0) {
    // No source pixels: report a distance no in-frame pixel pair can attain,
    // which pushes every pixel past any expansion cutoff.
    const float sentinel = static_cast<float>(w + h);
    std::fill(out.values.begin(), out.values.end(), sentinel);
    return out;
  }

  std::vector<double> sq(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    sq[i] = mask.values[i] ? 0.0 : kFar;
  }

  const int longest = std::max(w, h);
  std::vector<int> v(static_cast<std::size_t>(longest));
  std::vector<double> z(static_cast<std::size_t>(longest) + 1);
  std::vector<double> line(static_cast<std::size_t>(longest));
  std::vector<double> line_out(static_cast<std::size_t>(longest));

  // Columns first, then rows over the column results.
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) line[r] = sq[static_cast<std::size_t>(r) * w + c];
    squared_dt_1d(line.data(), h, v, z, line_out.data());
    for (int r = 0; r < h; ++r) sq[static_cast<std::size_t>(r) * w + c] = line_out[r];
  }
  for (int r = 0; r < h; ++r) {
    double* row = sq.data() + static_cast<std::size_t>(r) * w;
    squared_dt_1d(row, w, v, z, line_out.data());
    for (int c = 0; c < w; ++c) row[c] = line_out[c];
  }

  for (std::size_t i = 0; i < sq.size(); ++i) {
    out.values[i] = static_cast<float>(std::sqrt(sq[i]));
  }
  return out;
}

double compensation_probability(const Grid& fused, const BinaryMask& mask128,
                                std::vector<std::string>& flags) {
  double mean = 0.0;
  if (!masked_mean(fused, mask128, mean)) {
    flags.push_back("rho-mean-defaulted-empty-scene-mask");
    return 0.0;
  }
  return mean;
}

double max_expand_distance(double boundary_fraction) {
  return std::clamp(150.0 - 500.0 * boundary_fraction, 50.0, 100.0);
}

Grid distance_weighted_probability(const Grid& fused, const Grid& distance,
                                   double dist_max, double rho_mean) {
  if (!fused.same_shape(distance)) {
    throw Error("distance weighting: grid shapes differ");
  }
  Grid out = fused;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double d = distance.values[i];
    if (d <= 0.0 || d > dist_max) continue;
    const double lifted =
        fused.values[i] + ((dist_max - d) / dist_max) * rho_mean;
    out.values[i] = static_cast<float>(std::min(lifted, 1.0));
  }
  return out;
}

BinaryMask final_mask(const Grid& weighted, double mu_final) {
  return initial_mask(weighted, mu_final);
}

}  // namespace specmcd
