#include "specmcd/ctm.hpp"

#include <algorithm>
#include <cmath>

#include "specmcd/svd.hpp"

namespace specmcd {

Grid compute_ctm(const MultibandRaster& raster) {
  const auto& blue = raster.samples(BandName::Blue);
  const auto& green = raster.samples(BandName::Green);
  Grid out = Grid::zeros(raster.width(), raster.height());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = static_cast<float>(2.0 * blue[i] - 0.95 * green[i]);
  }
  return out;
}

Grid refine_ctm(const Grid& ctm, const MultiScaleMaps& maps) {
  if (!ctm.same_shape(Grid{maps.mask256.width, maps.mask256.height, {}})) {
    throw Error("refine_ctm: thickness map and scene masks differ in shape");
  }
  std::vector<float> sorted = ctm.values;
  const std::size_t mid = (sorted.size() - 1) / 2;  // lower median
  std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
  const float median = sorted[mid];

  const BinaryMask cloud_region =
      mask_intersection(maps.mask256, maps.mask128, maps.mask64);
  Grid out = ctm;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.values[i] > median && !cloud_region.values[i]) {
      out.values[i] *= 0.5f;
    }
  }
  return out;
}

Grid mean_filter(const Grid& grid, int window) {
  if (window <= 0 || window % 2 == 0) {
    throw Error("mean_filter window must be odd and positive, got " +
                std::to_string(window));
  }
  const int w = grid.width;
  const int h = grid.height;
  const int half = window / 2;

  // Summed-area table; one fixed accumulation order keeps results
  // bit-identical no matter how callers are threaded.
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  for (int r = 0; r < h; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < w; ++c) {
      row_sum += grid.at(r, c);
      sat[static_cast<std::size_t>(r + 1) * (w + 1) + (c + 1)] =
          sat[static_cast<std::size_t>(r) * (w + 1) + (c + 1)] + row_sum;
    }
  }

  Grid out = Grid::zeros(w, h);
  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(0, r - half);
    const int r1 = std::min(h - 1, r + half);
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(0, c - half);
      const int c1 = std::min(w - 1, c + half);
      const double sum =
          sat[static_cast<std::size_t>(r1 + 1) * (w + 1) + (c1 + 1)] -
          sat[static_cast<std::size_t>(r0) * (w + 1) + (c1 + 1)] -
          sat[static_cast<std::size_t>(r1 + 1) * (w + 1) + c0] +
          sat[static_cast<std::size_t>(r0) * (w + 1) + c0];
      const int count = (r1 - r0 + 1) * (c1 - c0 + 1);
      out.at(r, c) = static_cast<float>(sum / count);
    }
  }
  return out;
}

Grid truncated_svd(const Grid& grid, int rank) {
  if (rank <= 0) throw Error("truncated_svd rank must be positive");
  const int m = grid.height;
  const int n = grid.width;
  const int k = std::min({rank, m, n});

  std::vector<double> a(grid.values.begin(), grid.values.end());
  const SvdResult svd = jacobi_svd(a.data(), m, n);

  Grid out = Grid::zeros(n, m);
  std::vector<double> acc(static_cast<std::size_t>(m) * n, 0.0);
  for (int j = 0; j < k; ++j) {
    const double sigma = svd.singular_values[j];
    if (sigma == 0.0) break;
    const double* ucol = svd.u.data() + static_cast<std::size_t>(j) * m;
    const double* vcol = svd.v.data() + static_cast<std::size_t>(j) * n;
    for (int r = 0; r < m; ++r) {
      const double su = sigma * ucol[r];
      double* row = acc.data() + static_cast<std::size_t>(r) * n;
      for (int c = 0; c < n; ++c) {
        row[c] += su * vcol[c];
      }
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out.values[i] = static_cast<float>(acc[i]);
  }
  return out;
}

Grid normalize_grid(const Grid& grid) {
  if (grid.values.empty()) return grid;
  float lo = grid.values[0];
  float hi = grid.values[0];
  for (float v : grid.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Grid out = Grid::zeros(grid.width, grid.height);
  if (hi > lo) {
    const double span = static_cast<double>(hi) - static_cast<double>(lo);
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
      out.values[i] = static_cast<float>((grid.values[i] - lo) / span);
    }
  }
  return out;
}

CtmBundle build_ctm_bundle(const MultibandRaster& raster,
                           const MultiScaleMaps& maps, int mean_window,
                           int svd_rank) {
  CtmBundle bundle;
  bundle.raw = compute_ctm(raster);
  bundle.refined = refine_ctm(bundle.raw, maps);
  bundle.mean = normalize_grid(mean_filter(bundle.refined, mean_window));
  bundle.svd = normalize_grid(truncated_svd(bundle.refined, svd_rank));
  return bundle;
}

}  // namespace specmcd
