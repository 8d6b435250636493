#include "specmcd/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace specmcd {

namespace {

std::vector<int> axis_offsets(int extent, int scale) {
  const int stride = scale / 2;
  std::vector<int> offsets;
  for (int o = 0; o + scale <= extent; o += stride) {
    offsets.push_back(o);
  }
  if (offsets.back() + scale < extent) {
    offsets.push_back(extent - scale);
  }
  return offsets;
}

}  // namespace

std::vector<WindowSpec> enumerate_windows(int width, int height, int scale) {
  if (scale <= 0) throw Error("window scale must be positive");
  if (width < scale || height < scale) {
    throw Error("raster " + std::to_string(width) + "x" +
                std::to_string(height) + " cannot hold a " +
                std::to_string(scale) + "-pixel window");
  }
  const std::vector<int> rows = axis_offsets(height, scale);
  const std::vector<int> cols = axis_offsets(width, scale);
  std::vector<WindowSpec> windows;
  windows.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) {
      windows.push_back(WindowSpec{scale, r, c});
    }
  }
  return windows;
}

Block normalize_block(const MultibandRaster& raster, const WindowSpec& window) {
  const int s = window.scale;
  if (window.row < 0 || window.col < 0 || window.row + s > raster.height() ||
      window.col + s > raster.width()) {
    throw Error("window does not fit inside the raster");
  }
  std::uint16_t max_sample = 0;
  for (const Band& band : raster.bands()) {
    for (int r = 0; r < s; ++r) {
      const std::size_t base =
          static_cast<std::size_t>(window.row + r) * raster.width() + window.col;
      for (int c = 0; c < s; ++c) {
        max_sample = std::max(max_sample, band.samples[base + c]);
      }
    }
  }
  const double inv = max_sample > 0 ? 1.0 / static_cast<double>(max_sample) : 0.0;

  Block block;
  block.width = s;
  block.height = s;
  block.bands.reserve(raster.bands().size());
  for (const Band& band : raster.bands()) {
    BlockBand out;
    out.name = band.name;
    out.values.resize(static_cast<std::size_t>(s) * s);
    for (int r = 0; r < s; ++r) {
      const std::size_t src =
          static_cast<std::size_t>(window.row + r) * raster.width() + window.col;
      const std::size_t dst = static_cast<std::size_t>(r) * s;
      for (int c = 0; c < s; ++c) {
        out.values[dst + c] =
            static_cast<float>(band.samples[src + c] * inv);
      }
    }
    block.bands.push_back(std::move(out));
  }
  return block;
}

Block upscale_block(const Block& block) {
  if (block.width != block.height || block.width <= 0 ||
      kClassifierEdge % block.width != 0) {
    throw Error("block scale " + std::to_string(block.width) +
                " does not divide the classifier edge");
  }
  const int factor = kClassifierEdge / block.width;
  if (factor == 1) return block;

  Block out;
  out.width = kClassifierEdge;
  out.height = kClassifierEdge;
  out.bands.reserve(block.bands.size());
  for (const BlockBand& band : block.bands) {
    BlockBand up;
    up.name = band.name;
    up.values.resize(static_cast<std::size_t>(kClassifierEdge) * kClassifierEdge);
    for (int r = 0; r < kClassifierEdge; ++r) {
      const std::size_t src = static_cast<std::size_t>(r / factor) * block.width;
      const std::size_t dst = static_cast<std::size_t>(r) * kClassifierEdge;
      for (int c = 0; c < kClassifierEdge; ++c) {
        up.values[dst + c] = band.values[src + c / factor];
      }
    }
    out.bands.push_back(std::move(up));
  }
  return out;
}

Grid assemble_scale_map(int width, int height,
                        std::span<const WindowSpec> windows,
                        std::span<const float> scores) {
  if (windows.size() != scores.size()) {
    throw Error("assemble_scale_map: window/score count mismatch");
  }
  Grid map = Grid::zeros(width, height);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const WindowSpec& w = windows[i];
    const float score = scores[i];
    for (int r = 0; r < w.scale; ++r) {
      float* row = map.values.data() +
                   static_cast<std::size_t>(w.row + r) * width + w.col;
      for (int c = 0; c < w.scale; ++c) {
        row[c] = std::max(row[c], score);
      }
    }
  }
  return map;
}

std::pair<Grid, BinaryMask> build_scale_map(const MultibandRaster& raster,
                                            const Classifier& classifier,
                                            int scale, double mask_threshold,
                                            int workers) {
  const std::vector<WindowSpec> windows =
      enumerate_windows(raster.width(), raster.height(), scale);
  std::vector<float> scores(windows.size(), 0.0f);

  std::atomic<std::size_t> cursor{0};
  std::mutex error_lock;
  std::exception_ptr first_error;

  auto run = [&]() {
    try {
      for (std::size_t i; (i = cursor.fetch_add(1)) < windows.size();) {
        const Block block = upscale_block(normalize_block(raster, windows[i]));
        const CloudScore score =
            validated_score(classifier.classify(block), classifier.describe());
        scores[i] = score.value;
      }
    } catch (...) {
      std::lock_guard<std::mutex> guard(error_lock);
      if (!first_error) first_error = std::current_exception();
      cursor.store(windows.size());  // stop the other threads
    }
  };

  const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(windows.size())));
  if (thread_count == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  Grid map = assemble_scale_map(raster.width(), raster.height(), windows, scores);
  BinaryMask mask = BinaryMask::zeros(raster.width(), raster.height());
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    mask.values[i] = map.values[i] > mask_threshold ? 1 : 0;
  }
  return {std::move(map), std::move(mask)};
}

MultiScaleMaps multiscale_maps(const MultibandRaster& raster,
                               const Classifier& classifier,
                               double mask_threshold, int workers) {
  auto [p256, m256] =
      build_scale_map(raster, classifier, kWindowScales[0], mask_threshold, workers);
  auto [p128, m128] =
      build_scale_map(raster, classifier, kWindowScales[1], mask_threshold, workers);
  auto [p64, m64] =
      build_scale_map(raster, classifier, kWindowScales[2], mask_threshold, workers);
  MultiScaleMaps maps;
  maps.prob256 = std::move(p256);
  maps.mask256 = std::move(m256);
  maps.prob128 = std::move(p128);
  maps.mask128 = std::move(m128);
  maps.prob64 = std::move(p64);
  maps.mask64 = std::move(m64);
  return maps;
}

}  // namespace specmcd
