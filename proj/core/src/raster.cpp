#include "specmcd/raster.hpp"

#include <algorithm>

namespace specmcd {

std::string_view to_string(BandName name) {
  switch (name) {
    case BandName::Blue: return "blue";
    case BandName::Green: return "green";
    case BandName::Red: return "red";
    case BandName::Nir: return "nir";
  }
  return "unknown";
}

std::optional<BandName> parse_band_name(std::string_view text) {
  if (text == "blue") return BandName::Blue;
  if (text == "green") return BandName::Green;
  if (text == "red") return BandName::Red;
  if (text == "nir") return BandName::Nir;
  return std::nullopt;
}

MultibandRaster::MultibandRaster(int width, int height, std::vector<Band> bands)
    : width_(width), height_(height), bands_(std::move(bands)) {
  if (width_ < kMinRasterEdge || height_ < kMinRasterEdge) {
    throw Error("raster dimensions " + std::to_string(width_) + "x" +
                std::to_string(height_) + " below minimum " +
                std::to_string(kMinRasterEdge));
  }
  const std::size_t expected = pixel_count();
  bool saw[4] = {false, false, false, false};
  for (const Band& band : bands_) {
    const int idx = static_cast<int>(band.name);
    if (saw[idx]) {
      throw Error("duplicate band '" + std::string(to_string(band.name)) + "'");
    }
    saw[idx] = true;
    if (band.samples.size() != expected) {
      throw Error("band '" + std::string(to_string(band.name)) + "' holds " +
                  std::to_string(band.samples.size()) + " samples, expected " +
                  std::to_string(expected));
    }
  }
  if (!saw[static_cast<int>(BandName::Blue)] ||
      !saw[static_cast<int>(BandName::Green)]) {
    throw Error("raster must carry both blue and green bands");
  }
}

bool MultibandRaster::has(BandName name) const noexcept {
  for (const Band& band : bands_) {
    if (band.name == name) return true;
  }
  return false;
}

const std::vector<std::uint16_t>& MultibandRaster::samples(BandName name) const {
  for (const Band& band : bands_) {
    if (band.name == name) return band.samples;
  }
  throw Error("raster has no '" + std::string(to_string(name)) + "' band");
}

Grid Grid::zeros(int width, int height) {
  Grid g;
  g.width = width;
  g.height = height;
  g.values.assign(static_cast<std::size_t>(width) * height, 0.0f);
  return g;
}

BinaryMask BinaryMask::zeros(int width, int height) {
  BinaryMask m;
  m.width = width;
  m.height = height;
  m.values.assign(static_cast<std::size_t>(width) * height, 0);
  return m;
}

std::size_t BinaryMask::count_true() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(),
                    [](std::uint8_t v) { return v != 0; }));
}

namespace {
void require_same_shape(const BinaryMask& a, const BinaryMask& b,
                        const char* op) {
  if (!a.same_shape(b)) {
    throw Error(std::string(op) + ": mask shapes differ");
  }
}
}  // namespace

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_intersection");
  BinaryMask out = BinaryMask::zeros(a.width, a.height);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (a.values[i] & b.values[i]) ? 1 : 0;
  }
  return out;
}

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b,
                             const BinaryMask& c) {
  return mask_intersection(mask_intersection(a, b), c);
}

BinaryMask mask_difference_sym(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b, "mask_difference_sym");
  BinaryMask out = BinaryMask::zeros(a.width, a.height);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (a.values[i] ^ b.values[i]) ? 1 : 0;
  }
  return out;
}

bool mask_subset(const BinaryMask& inner, const BinaryMask& outer) {
  require_same_shape(inner, outer, "mask_subset");
  for (std::size_t i = 0; i < inner.values.size(); ++i) {
    if (inner.values[i] && !outer.values[i]) return false;
  }
  return true;
}

}  // namespace specmcd
