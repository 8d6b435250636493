#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specmcd/raster.hpp"

namespace specmcd {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  double oa = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  // Names of any metric whose denominator was zero and which was therefore
  // reported as 0 instead of NaN.
  std::vector<std::string> flags;
};

// Pixelwise comparison with cloud as the positive class.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& ref);

// Throws on an empty confusion table; otherwise never produces NaN.
Metrics compute_metrics(const ConfusionCounts& counts);

// Serializes metrics and counts as a single JSON object.
std::string metrics_json(const Metrics& metrics, const ConfusionCounts& counts);

}  // namespace specmcd
