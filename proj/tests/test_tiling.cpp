#include <doctest.h>

#include <set>
#include <vector>

#include "helpers.hpp"
#include "specmcd/tiling.hpp"

using namespace specmcd;

namespace {

std::set<int> col_offsets(const std::vector<WindowSpec>& windows) {
  std::set<int> cols;
  for (const WindowSpec& w : windows) cols.insert(w.col);
  return cols;
}

std::set<int> row_offsets(const std::vector<WindowSpec>& windows) {
  std::set<int> rows;
  for (const WindowSpec& w : windows) rows.insert(w.row);
  return rows;
}

// Returns a fixed score for every block; lets the threshold tests pick the
// exact boundary value.
class FixedClassifier final : public Classifier {
 public:
  explicit FixedClassifier(float value) : value_(value) {}
  CloudScore classify(const Block&) const override { return {value_}; }
  std::string describe() const override { return "test:fixed"; }

 private:
  float value_;
};

}  // namespace

TEST_CASE("window enumeration walks at half-scale stride") {
  const auto windows = enumerate_windows(512, 512, 256);
  CHECK(windows.size() == 9);
  CHECK(col_offsets(windows) == std::set<int>{0, 128, 256});
  CHECK(row_offsets(windows) == std::set<int>{0, 128, 256});
}

TEST_CASE("a raster equal to the scale yields exactly one window") {
  const auto windows = enumerate_windows(256, 256, 256);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].row == 0);
  CHECK(windows[0].col == 0);
  CHECK(windows[0].scale == 256);
}

TEST_CASE("an uncovered edge gets one extra flush window") {
  SUBCASE("just past one window") {
    const auto windows = enumerate_windows(300, 256, 256);
    CHECK(windows.size() == 2);
    CHECK(col_offsets(windows) == std::set<int>{0, 44});
    CHECK(row_offsets(windows) == std::set<int>{0});
  }
  SUBCASE("just past the stride grid") {
    const auto windows = enumerate_windows(520, 520, 256);
    CHECK(col_offsets(windows) == std::set<int>{0, 128, 256, 264});
    CHECK(windows.size() == 16);
  }
}

TEST_CASE("window enumeration rejects rasters below the scale") {
  CHECK_THROWS_AS(enumerate_windows(255, 256, 256), Error);
  CHECK_THROWS_AS(enumerate_windows(256, 192, 256), Error);
  CHECK_THROWS_AS(enumerate_windows(64, 64, 0), Error);
}

TEST_CASE("block normalization divides by the joint band maximum") {
  // Blue 1000 everywhere, green 2000 everywhere: the block maximum is 2000
  // over both bands, so blue lands at 0.5 and green at 1.0.
  const MultibandRaster raster = testutil::constant_raster(64, 64, 1000, 2000);
  const Block block = normalize_block(raster, WindowSpec{64, 0, 0});

  REQUIRE(block.width == 64);
  REQUIRE(block.height == 64);
  CHECK((*block.find(BandName::Blue))[0] == 0.5f);
  CHECK((*block.find(BandName::Green))[0] == 1.0f);
}

TEST_CASE("degenerate blocks normalize by rule") {
  SUBCASE("all-zero block stays zero") {
    const MultibandRaster raster = testutil::constant_raster(64, 64, 0, 0);
    const Block block = normalize_block(raster, WindowSpec{64, 0, 0});
    CHECK((*block.find(BandName::Blue))[10] == 0.0f);
    CHECK((*block.find(BandName::Green))[10] == 0.0f);
  }
  SUBCASE("constant block saturates to one") {
    const MultibandRaster raster = testutil::constant_raster(64, 64, 37, 37);
    const Block block = normalize_block(raster, WindowSpec{64, 0, 0});
    CHECK((*block.find(BandName::Blue))[0] == 1.0f);
    CHECK((*block.find(BandName::Green))[63] == 1.0f);
  }
}

TEST_CASE("out-of-bounds windows are rejected") {
  const MultibandRaster raster = testutil::constant_raster(64, 64, 1, 1);
  CHECK_THROWS_AS(normalize_block(raster, WindowSpec{64, 1, 0}), Error);
  CHECK_THROWS_AS(normalize_block(raster, WindowSpec{64, 0, -1}), Error);
}

TEST_CASE("upscaling replicates pixels to the classifier edge") {
  SUBCASE("64 to 256 produces 4x4 patches") {
    Block block;
    block.width = block.height = 64;
    std::vector<float> values(64 * 64, 0.0f);
    values[0] = 1.0f;      // (0, 0)
    values[65] = 0.5f;     // (1, 1)
    block.bands.push_back({BandName::Blue, std::move(values)});

    const Block up = upscale_block(block);
    REQUIRE(up.width == kClassifierEdge);
    REQUIRE(up.height == kClassifierEdge);
    const auto& v = *up.find(BandName::Blue);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        CHECK(v[static_cast<std::size_t>(r) * 256 + c] == 1.0f);
      }
    }
    CHECK(v[3 * 256 + 4] == 0.0f);   // outside the first patch
    CHECK(v[4 * 256 + 4] == 0.5f);   // second patch starts at (4, 4)
    CHECK(v[7 * 256 + 7] == 0.5f);
    CHECK(v[8 * 256 + 8] == 0.0f);
  }
  SUBCASE("128 to 256 produces 2x2 patches") {
    Block block;
    block.width = block.height = 128;
    std::vector<float> values(128 * 128, 0.0f);
    values[0] = 1.0f;
    block.bands.push_back({BandName::Blue, std::move(values)});

    const Block up = upscale_block(block);
    const auto& v = *up.find(BandName::Blue);
    CHECK(v[0] == 1.0f);
    CHECK(v[1] == 1.0f);
    CHECK(v[256] == 1.0f);
    CHECK(v[257] == 1.0f);
    CHECK(v[2] == 0.0f);
    CHECK(v[2 * 256] == 0.0f);
  }
  SUBCASE("classifier-sized blocks pass through unchanged") {
    const Block block = testutil::constant_block(0.3f, 0.7f);
    const Block up = upscale_block(block);
    CHECK(up.width == 256);
    CHECK((*up.find(BandName::Blue)) == (*block.find(BandName::Blue)));
  }
  SUBCASE("scales that do not divide the edge are rejected") {
    Block block;
    block.width = block.height = 100;
    block.bands.push_back({BandName::Blue, std::vector<float>(100 * 100, 0.0f)});
    CHECK_THROWS_AS(upscale_block(block), Error);

    block.width = 64;  // now width != height
    CHECK_THROWS_AS(upscale_block(block), Error);
  }
}

TEST_CASE("map assembly keeps the maximum where windows overlap") {
  SUBCASE("disjoint footprints hold their own scores") {
    const std::vector<WindowSpec> windows = {{2, 0, 0}, {2, 0, 2}};
    const std::vector<float> scores = {0.2f, 0.9f};
    const Grid map = assemble_scale_map(4, 2, windows, scores);
    CHECK(map.at(0, 0) == 0.2f);
    CHECK(map.at(1, 1) == 0.2f);
    CHECK(map.at(0, 2) == 0.9f);
    CHECK(map.at(1, 3) == 0.9f);
  }
  SUBCASE("overlap takes the larger score") {
    const std::vector<WindowSpec> windows = {{2, 0, 0}, {2, 0, 1}};
    const std::vector<float> scores = {0.3f, 0.7f};
    const Grid map = assemble_scale_map(3, 2, windows, scores);
    CHECK(map.at(0, 0) == 0.3f);
    CHECK(map.at(0, 1) == 0.7f);  // covered by both
    CHECK(map.at(0, 2) == 0.7f);

    // Window order must not matter for a max-reduction.
    const std::vector<WindowSpec> reversed = {{2, 0, 1}, {2, 0, 0}};
    const std::vector<float> rscores = {0.7f, 0.3f};
    const Grid again = assemble_scale_map(3, 2, reversed, rscores);
    CHECK(again.values == map.values);
  }
  SUBCASE("window and score counts must agree") {
    const std::vector<WindowSpec> windows = {{2, 0, 0}};
    const std::vector<float> scores = {0.1f, 0.2f};
    CHECK_THROWS_AS(assemble_scale_map(4, 2, windows, scores), Error);
  }
}

TEST_CASE("scene masks use a strict score threshold") {
  const MultibandRaster raster = testutil::constant_raster(256, 256, 5, 5);

  const auto [at_threshold, mask_at] =
      build_scale_map(raster, FixedClassifier(0.5f), 64, 0.5);
  CHECK(at_threshold.at(0, 0) == 0.5f);
  CHECK(mask_at.count_true() == 0);  // exactly 0.5 is not "above"

  const auto [above, mask_above] =
      build_scale_map(raster, FixedClassifier(0.50001f), 64, 0.5);
  CHECK(mask_above.count_true() == mask_above.size());
}

TEST_CASE("threaded window classification matches the serial result") {
  // A uniform raster is classifier-friendly but exercises the work queue;
  // scores at every window must agree regardless of the worker count.
  const MultibandRaster raster = testutil::constant_raster(256, 256, 900, 400);
  const SpectralMockClassifier mock;

  const auto [serial, serial_mask] = build_scale_map(raster, mock, 64, 0.5, 1);
  const auto [threaded, threaded_mask] =
      build_scale_map(raster, mock, 64, 0.5, 4);

  CHECK(serial.values == threaded.values);
  CHECK(serial_mask.values == threaded_mask.values);
}

TEST_CASE("multiscale maps cover all three scales consistently") {
  const MultibandRaster raster = testutil::constant_raster(256, 256, 900, 400);
  const SpectralMockClassifier mock;
  const MultiScaleMaps maps = multiscale_maps(raster, mock, 0.5);

  for (const Grid* map : {&maps.prob256, &maps.prob128, &maps.prob64}) {
    CHECK(map->width == 256);
    CHECK(map->height == 256);
  }
  // A uniform raster gives every window the same score, hence constant maps.
  CHECK(maps.prob256.at(0, 0) == maps.prob256.at(255, 255));
  CHECK(maps.prob128.at(0, 0) == maps.prob64.at(0, 0));

  // Masks are the strict thresholding of their maps.
  for (std::size_t i = 0; i < maps.prob64.values.size(); ++i) {
    CHECK(maps.mask64.values[i] == (maps.prob64.values[i] > 0.5f ? 1 : 0));
  }
}

TEST_CASE("an all-zero raster produces empty scene masks") {
  const MultibandRaster raster = testutil::constant_raster(256, 256, 0, 0);
  const MultiScaleMaps maps = multiscale_maps(raster, SpectralMockClassifier(), 0.5);
  CHECK(maps.mask256.count_true() == 0);
  CHECK(maps.mask128.count_true() == 0);
  CHECK(maps.mask64.count_true() == 0);
}

TEST_CASE("classifier failures propagate out of the thread pool") {
  class ThrowingClassifier final : public Classifier {
   public:
    CloudScore classify(const Block&) const override {
      throw BackendError("deliberate test failure");
    }
    std::string describe() const override { return "test:throwing"; }
  };
  const MultibandRaster raster = testutil::constant_raster(256, 256, 1, 1);
  CHECK_THROWS_AS(build_scale_map(raster, ThrowingClassifier(), 64, 0.5, 4),
                  BackendError);
}
