#pragma once

#include <filesystem>
#include <string_view>

#include "specmcd/raster.hpp"

namespace specmcd {

// Container layout: <dir>/meta.json lists width, height and the band files;
// each band is a 16-bit binary PGM (P5, maxval 65535, big-endian samples).
MultibandRaster load_multiband(const std::filesystem::path& dir);
void save_multiband(const MultibandRaster& raster,
                    const std::filesystem::path& dir);

// Grids are raw little-endian float32, row-major, with a JSON sidecar at
// <path>.json recording {"width", "height", "role"}.
void save_grid(const Grid& grid, const std::filesystem::path& path,
               std::string_view role = "grid");
Grid load_grid(const std::filesystem::path& path);

// Masks are 8-bit binary PGM, 0 = clear, 255 = cloud. Any other sample value
// is rejected on load.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);

}  // namespace specmcd
