#include "specmcd/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace specmcd {

Rgb probability_color(double value) {
  const double v = std::clamp(value, 0.0, 1.0);
  Rgb c;
  c.r = static_cast<std::uint8_t>(std::lround(255.0 * v));
  c.g = 0;
  c.b = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - v)));
  return c;
}

namespace {

void append_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& payload) {
  append_u32be(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const auto crc =
      crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  append_u32be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
  if (width <= 0 || height <= 0) {
    throw Error("png writer: non-positive dimensions");
  }
  const std::size_t expected =
      static_cast<std::size_t>(width) * height * 3;
  if (rgb.size() != expected) {
    throw Error("png writer: pixel buffer size mismatch");
  }

  // Raw scanlines, each prefixed with filter type 0 (no per-row filtering;
  // these images are synthetic and compress fine without it).
  std::vector<std::uint8_t> raw;
  raw.reserve(expected + static_cast<std::size_t>(height));
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  for (int row = 0; row < height; ++row) {
    raw.push_back(0);
    const std::uint8_t* line = rgb.data() + static_cast<std::size_t>(row) * stride;
    raw.insert(raw.end(), line, line + stride);
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> deflated(bound);
  if (compress2(deflated.data(), &bound, raw.data(),
                static_cast<uLong>(raw.size()), Z_BEST_SPEED) != Z_OK) {
    throw Error("png writer: deflate failed");
  }
  deflated.resize(bound);

  std::vector<std::uint8_t> png;
  static const std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G',
                                             '\r', '\n', 0x1a, '\n'};
  png.insert(png.end(), kSignature, kSignature + 8);

  std::vector<std::uint8_t> ihdr;
  append_u32be(ihdr, static_cast<std::uint32_t>(width));
  append_u32be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // truecolor
  ihdr.push_back(0);   // deflate
  ihdr.push_back(0);   // adaptive filtering
  ihdr.push_back(0);   // no interlace
  append_chunk(png, "IHDR", ihdr);
  append_chunk(png, "IDAT", deflated);
  append_chunk(png, "IEND", {});

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out.write(reinterpret_cast<const char*>(png.data()),
            static_cast<std::streamsize>(png.size()));
  if (!out) {
    throw IoError("short write to '" + path + "'");
  }
}

void render_grid_png(const Grid& grid, const std::string& path) {
  std::vector<std::uint8_t> rgb;
  rgb.reserve(grid.values.size() * 3);
  for (float v : grid.values) {
    const Rgb c = probability_color(v);
    rgb.push_back(c.r);
    rgb.push_back(c.g);
    rgb.push_back(c.b);
  }
  write_png_rgb(path, grid.width, grid.height, rgb);
}

void render_mask_png(const BinaryMask& mask, const std::string& path) {
  std::vector<std::uint8_t> rgb;
  rgb.reserve(mask.values.size() * 3);
  for (std::uint8_t v : mask.values) {
    const std::uint8_t byte = v ? 255 : 0;
    rgb.push_back(byte);
    rgb.push_back(byte);
    rgb.push_back(byte);
  }
  write_png_rgb(path, mask.width, mask.height, rgb);
}

}  // namespace specmcd
