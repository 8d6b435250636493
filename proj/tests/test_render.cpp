#include <doctest.h>

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "helpers.hpp"
#include "specmcd/render.hpp"

using namespace specmcd;

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

std::uint32_t u32be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) |
         static_cast<std::uint32_t>(p[3]);
}

struct Chunk {
  std::string type;
  std::vector<std::uint8_t> payload;
};

std::vector<Chunk> parse_chunks(const std::vector<std::uint8_t>& png) {
  static const std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a,
                                       '\n'};
  REQUIRE(png.size() >= 8);
  REQUIRE(std::memcmp(png.data(), kSig, 8) == 0);

  std::vector<Chunk> chunks;
  std::size_t pos = 8;
  while (pos + 12 <= png.size()) {
    const std::uint32_t len = u32be(png.data() + pos);
    Chunk chunk;
    chunk.type.assign(png.begin() + pos + 4, png.begin() + pos + 8);
    chunk.payload.assign(png.begin() + pos + 8, png.begin() + pos + 8 + len);
    chunks.push_back(std::move(chunk));
    pos += 12 + len;
  }
  REQUIRE(pos == png.size());
  return chunks;
}

std::vector<std::uint8_t> inflate_scanlines(const Chunk& idat,
                                            std::size_t expected) {
  std::vector<std::uint8_t> raw(expected);
  uLongf dest_len = static_cast<uLongf>(expected);
  REQUIRE(uncompress(raw.data(), &dest_len, idat.payload.data(),
                     static_cast<uLong>(idat.payload.size())) == Z_OK);
  REQUIRE(dest_len == expected);
  return raw;
}

}  // namespace

TEST_CASE("probability colors run blue to red through purple") {
  const Rgb zero = probability_color(0.0);
  CHECK(zero.r == 0);
  CHECK(zero.g == 0);
  CHECK(zero.b == 255);

  const Rgb one = probability_color(1.0);
  CHECK(one.r == 255);
  CHECK(one.g == 0);
  CHECK(one.b == 0);

  const Rgb mid = probability_color(0.5);
  CHECK(mid.r == 128);
  CHECK(mid.g == 0);
  CHECK(mid.b == 128);

  // Out-of-range input clamps rather than wrapping.
  const Rgb below = probability_color(-0.25);
  CHECK(below.b == 255);
  CHECK(below.r == 0);
  const Rgb above = probability_color(1.25);
  CHECK(above.r == 255);
  CHECK(above.b == 0);
}

TEST_CASE("png writer emits a decodable truecolor image") {
  testutil::TempDir tmp;
  const auto path = tmp.path() / "img.png";

  const int width = 5, height = 3;
  std::vector<std::uint8_t> rgb;
  for (int i = 0; i < width * height; ++i) {
    rgb.push_back(static_cast<std::uint8_t>(i));        // r
    rgb.push_back(static_cast<std::uint8_t>(200 - i));  // g
    rgb.push_back(static_cast<std::uint8_t>(3 * i));    // b
  }
  write_png_rgb(path.string(), width, height, rgb);

  const auto chunks = parse_chunks(read_bytes(path));
  REQUIRE(chunks.size() == 3);

  const Chunk& ihdr = chunks[0];
  CHECK(ihdr.type == "IHDR");
  REQUIRE(ihdr.payload.size() == 13);
  CHECK(u32be(ihdr.payload.data()) == 5);      // width
  CHECK(u32be(ihdr.payload.data() + 4) == 3);  // height
  CHECK(ihdr.payload[8] == 8);                 // bit depth
  CHECK(ihdr.payload[9] == 2);                 // truecolor
  CHECK(ihdr.payload[12] == 0);                // no interlace

  CHECK(chunks[1].type == "IDAT");
  CHECK(chunks[2].type == "IEND");
  CHECK(chunks[2].payload.empty());

  // Each scanline is a filter byte (0) followed by the raw pixels.
  const std::size_t stride = 1 + 3 * static_cast<std::size_t>(width);
  const auto raw = inflate_scanlines(chunks[1], stride * height);
  for (int row = 0; row < height; ++row) {
    CHECK(raw[row * stride] == 0);
    CHECK(std::memcmp(raw.data() + row * stride + 1,
                      rgb.data() + row * width * 3,
                      static_cast<std::size_t>(width) * 3) == 0);
  }
}

TEST_CASE("png writer rejects malformed requests") {
  testutil::TempDir tmp;
  const auto path = (tmp.path() / "img.png").string();
  CHECK_THROWS_AS(write_png_rgb(path, 2, 2, std::vector<std::uint8_t>(11)),
                  Error);
  CHECK_THROWS_AS(write_png_rgb(path, 0, 2, {}), Error);
}

TEST_CASE("grid rendering maps probabilities through the color ramp") {
  testutil::TempDir tmp;
  const auto path = tmp.path() / "grid.png";
  const Grid grid = testutil::make_grid(2, 1, {0.0f, 1.0f});
  render_grid_png(grid, path.string());

  const auto chunks = parse_chunks(read_bytes(path));
  const auto raw = inflate_scanlines(chunks[1], 1 + 6);
  // Pixel 0 is pure blue, pixel 1 pure red.
  CHECK(raw[1] == 0);
  CHECK(raw[3] == 255);
  CHECK(raw[4] == 255);
  CHECK(raw[6] == 0);
}

TEST_CASE("mask rendering is black and white") {
  testutil::TempDir tmp;
  const auto path = tmp.path() / "mask.png";
  render_mask_png(testutil::make_mask(2, 1, {1, 0}), path.string());

  const auto chunks = parse_chunks(read_bytes(path));
  const auto raw = inflate_scanlines(chunks[1], 1 + 6);
  CHECK(raw[1] == 255);
  CHECK(raw[2] == 255);
  CHECK(raw[3] == 255);
  CHECK(raw[4] == 0);
  CHECK(raw[5] == 0);
  CHECK(raw[6] == 0);
}
