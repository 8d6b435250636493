#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmcd/raster.hpp"

namespace specmcd {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// Linear blue-to-red ramp over [0,1] (input clamped): 0 maps to pure blue,
// 1 to pure red, 0.5 to the purple midpoint (128, 0, 128).
Rgb probability_color(double value);

// Writes an 8-bit truecolor PNG. `rgb` is row-major, 3 bytes per pixel.
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

void render_grid_png(const Grid& grid, const std::string& path);

// Black/white rendering for masks.
void render_mask_png(const BinaryMask& mask, const std::string& path);

}  // namespace specmcd
