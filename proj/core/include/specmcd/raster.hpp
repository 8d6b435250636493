#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specmcd {

// Base type for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File or container problems; the message names the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

// Classifier backend failures (bad frames, timeouts, dead workers).
class BackendError : public Error {
 public:
  using Error::Error;
};

// Bad configuration values or unknown keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class BandName { Blue, Green, Red, Nir };

std::string_view to_string(BandName name);
std::optional<BandName> parse_band_name(std::string_view text);

struct Band {
  BandName name;
  std::vector<std::uint16_t> samples;  // row-major, width*height
};

// Smallest raster edge the pipeline accepts.
inline constexpr int kMinRasterEdge = 64;

// A calibrated multispectral frame. Blue and green are mandatory because the
// thickness index is computed from them; red and nir ride along for rendering
// and for external classifiers.
class MultibandRaster {
 public:
  MultibandRaster(int width, int height, std::vector<Band> bands);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  const std::vector<Band>& bands() const noexcept { return bands_; }
  bool has(BandName name) const noexcept;
  const std::vector<std::uint16_t>& samples(BandName name) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Band> bands_;
};

// Dense float plane, row-major. Probability maps, thickness maps, gradients
// and distance fields all use this shape.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  static Grid zeros(int width, int height);

  float at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  float& at(int row, int col) {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const noexcept { return values.size(); }
  bool same_shape(const Grid& other) const noexcept {
    return width == other.width && height == other.height;
  }
};

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;  // 0 or 1

  static BinaryMask zeros(int width, int height);

  bool at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col] != 0;
  }
  void set(int row, int col, bool on) {
    values[static_cast<std::size_t>(row) * width + col] = on ? 1 : 0;
  }
  std::size_t size() const noexcept { return values.size(); }
  std::size_t count_true() const noexcept;
  bool same_shape(const BinaryMask& other) const noexcept {
    return width == other.width && height == other.height;
  }
};

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b,
                             const BinaryMask& c);
// Symmetric difference: pixels covered by exactly one of the two masks.
BinaryMask mask_difference_sym(const BinaryMask& a, const BinaryMask& b);
// True when every set pixel of `inner` is also set in `outer`.
bool mask_subset(const BinaryMask& inner, const BinaryMask& outer);

}  // namespace specmcd
