#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "specmcd/subprocess_classifier.hpp"

using namespace specmcd;

namespace {

std::string stub(const std::string& mode) {
  return std::string(STUB_WORKER_PATH) + " " + mode;
}

Block small_block(int edge, float blue, float green) {
  Block block;
  block.width = block.height = edge;
  const std::size_t n = static_cast<std::size_t>(edge) * edge;
  block.bands.push_back({BandName::Blue, std::vector<float>(n, blue)});
  block.bands.push_back({BandName::Green, std::vector<float>(n, green)});
  return block;
}

}  // namespace

TEST_CASE("request frames carry magic, header and band-major payload") {
  Block block;
  block.width = 2;
  block.height = 1;
  block.bands.push_back({BandName::Blue, {0.5f, 0.25f}});
  block.bands.push_back({BandName::Green, {1.0f, 0.75f}});

  const std::vector<std::uint8_t> frame = encode_request_frame(block);
  const std::vector<std::uint8_t> expected = {
      'S',  'M',  'C',  'D',         // magic
      0x02, 0x00, 0x00, 0x00,        // width
      0x01, 0x00, 0x00, 0x00,        // height
      0x02, 0x00, 0x00, 0x00,        // band count
      0x00, 0x00, 0x00, 0x3f,        // 0.5f
      0x00, 0x00, 0x80, 0x3e,        // 0.25f
      0x00, 0x00, 0x80, 0x3f,        // 1.0f
      0x00, 0x00, 0x40, 0x3f,        // 0.75f
  };
  CHECK(frame == expected);
}

TEST_CASE("constant stub score comes back verbatim") {
  const SubprocessClassifier classifier(stub("const:0.5"));
  const Block block = small_block(4, 0.3f, 0.6f);
  CHECK(classifier.classify(block).value == 0.5f);
  CHECK(classifier.classify(block).value == 0.5f);  // worker stays alive
}

TEST_CASE("stub can compute from the frame payload") {
  const SubprocessClassifier classifier(stub("band0mean"));
  // First band constant 0.25; the stub averages exactly that band.
  CHECK(classifier.classify(small_block(4, 0.25f, 0.9f)).value == 0.25f);
  CHECK(classifier.classify(small_block(8, 0.75f, 0.1f)).value == 0.75f);
}

TEST_CASE("round-robin over several workers keeps answers deterministic") {
  SubprocessOptions options;
  options.workers = 4;
  const SubprocessClassifier classifier(stub("band0mean"), options);
  // More requests than workers, so every pipe serves at least twice.
  for (int i = 0; i < 10; ++i) {
    const float v = 0.1f * static_cast<float>(i % 5);
    CHECK(classifier.classify(small_block(4, v, 0.0f)).value ==
          doctest::Approx(v).epsilon(1e-6));
  }
  CHECK(classifier.describe() ==
        "subprocess:" + stub("band0mean") + " (workers=4)");
}

TEST_CASE("out-of-range worker reply is a backend error") {
  const SubprocessClassifier classifier(stub("oob"));
  CHECK_THROWS_WITH_AS(classifier.classify(small_block(4, 0.0f, 0.0f)),
                       doctest::Contains("outside [0, 1]"), BackendError);
}

TEST_CASE("bad response magic is a backend error") {
  const SubprocessClassifier classifier(stub("badmagic"));
  CHECK_THROWS_AS(classifier.classify(small_block(4, 0.0f, 0.0f)),
                  BackendError);
}

TEST_CASE("worker death mid-frame is a backend error and stays broken") {
  const SubprocessClassifier classifier(stub("die"));
  const Block block = small_block(4, 0.0f, 0.0f);
  CHECK_THROWS_AS(classifier.classify(block), BackendError);
  // The pool does not respawn; later calls must fail fast, not hang.
  CHECK_THROWS_WITH_AS(classifier.classify(block),
                       doctest::Contains("previously failed"), BackendError);
}

TEST_CASE("slow worker trips the per-frame timeout") {
  SubprocessOptions options;
  options.timeout_seconds = 0.05;
  const SubprocessClassifier classifier(stub("sleep:2000"), options);
  CHECK_THROWS_WITH_AS(classifier.classify(small_block(4, 0.0f, 0.0f)),
                       doctest::Contains("timed out"), BackendError);
}

TEST_CASE("constructor validates its options") {
  SubprocessOptions bad_workers;
  bad_workers.workers = 0;
  CHECK_THROWS_AS(SubprocessClassifier(stub("const:0.5"), bad_workers),
                  ConfigError);

  SubprocessOptions bad_timeout;
  bad_timeout.timeout_seconds = 0.0;
  CHECK_THROWS_AS(SubprocessClassifier(stub("const:0.5"), bad_timeout),
                  ConfigError);
}
