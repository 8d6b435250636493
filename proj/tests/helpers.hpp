#pragma once

// Small builders shared by the unit suites, plus a self-cleaning scratch
// directory for the I/O tests.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmcd/classifier.hpp"
#include "specmcd/raster.hpp"

namespace testutil {

inline specmcd::Grid make_grid(int width, int height,
                               std::initializer_list<float> values) {
  specmcd::Grid g = specmcd::Grid::zeros(width, height);
  if (values.size() != g.values.size()) {
    throw std::logic_error("make_grid: value count does not match shape");
  }
  std::copy(values.begin(), values.end(), g.values.begin());
  return g;
}

inline specmcd::BinaryMask make_mask(int width, int height,
                                     std::initializer_list<int> values) {
  specmcd::BinaryMask m = specmcd::BinaryMask::zeros(width, height);
  if (values.size() != m.values.size()) {
    throw std::logic_error("make_mask: value count does not match shape");
  }
  auto it = values.begin();
  for (std::size_t i = 0; i < m.values.size(); ++i, ++it) {
    m.values[i] = *it ? 1 : 0;
  }
  return m;
}

// Two-band raster with every sample of a band equal. Enough for the
// pixelwise arithmetic tests, which never look at spatial structure.
inline specmcd::MultibandRaster constant_raster(int width, int height,
                                                std::uint16_t blue,
                                                std::uint16_t green) {
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<specmcd::Band> bands;
  bands.push_back({specmcd::BandName::Blue,
                   std::vector<std::uint16_t>(n, blue)});
  bands.push_back({specmcd::BandName::Green,
                   std::vector<std::uint16_t>(n, green)});
  return specmcd::MultibandRaster(width, height, std::move(bands));
}

// Classifier-sized block with constant blue and green planes.
inline specmcd::Block constant_block(float blue, float green) {
  specmcd::Block block;
  block.width = specmcd::kClassifierEdge;
  block.height = specmcd::kClassifierEdge;
  const std::size_t n = static_cast<std::size_t>(block.width) * block.height;
  block.bands.push_back({specmcd::BandName::Blue, std::vector<float>(n, blue)});
  block.bands.push_back({specmcd::BandName::Green,
                         std::vector<float>(n, green)});
  return block;
}

class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    std::string pattern = (base / "specmcd-test-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) {
      throw std::runtime_error("mkdtemp failed for " + pattern);
    }
    path_ = pattern;
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);  // best effort
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const char* leaf) const {
    return path_ / leaf;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
