#pragma once

#include <string>
#include <vector>

#include "specmcd/raster.hpp"

namespace specmcd {

// Edge length of the block every classifier backend receives.
inline constexpr int kClassifierEdge = 256;

struct BlockBand {
  BandName name;
  std::vector<float> values;  // row-major, width*height, each in [0, 1]
};

// A normalized image block. Block normalization produces one at window size;
// upscaling brings it to kClassifierEdge x kClassifierEdge before it reaches
// a classifier.
struct Block {
  int width = 0;
  int height = 0;
  std::vector<BlockBand> bands;

  const std::vector<float>* find(BandName name) const {
    for (const BlockBand& band : bands) {
      if (band.name == name) return &band.values;
    }
    return nullptr;
  }
};

struct CloudScore {
  float value = 0.0f;
};

class Classifier {
 public:
  virtual ~Classifier() = default;

  // Scores one normalized 256x256 block in [0, 1]. Implementations must be
  // safe to call from several threads at once and must return identical
  // scores for identical blocks.
  virtual CloudScore classify(const Block& block) const = 0;

  // Human-readable backend identity, recorded in run manifests.
  virtual std::string describe() const = 0;
};

// Stand-in for a trained scene classifier. Scores a block by the average
// positive part of the blue/green thickness index, scaled by a saturation
// constant: clamp01(mean(max(0, 2*B - 0.95*G)) / saturation).
class SpectralMockClassifier final : public Classifier {
 public:
  explicit SpectralMockClassifier(double saturation = 1.0);

  CloudScore classify(const Block& block) const override;
  std::string describe() const override;

 private:
  double saturation_;
};

// Range gate applied to every backend result before it enters the pipeline.
// Throws BackendError for NaN or values outside [0, 1].
CloudScore validated_score(CloudScore score, std::string_view backend);

}  // namespace specmcd
