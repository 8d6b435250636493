#include "specmcd/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specmcd {

SpectralMockClassifier::SpectralMockClassifier(double saturation)
    : saturation_(saturation) {
  if (!(saturation_ > 0.0) || !std::isfinite(saturation_)) {
    throw ConfigError("mock classifier saturation must be positive and finite");
  }
}

CloudScore SpectralMockClassifier::classify(const Block& block) const {
  if (block.width != kClassifierEdge || block.height != kClassifierEdge) {
    throw BackendError("mock classifier expects a 256x256 block, got " +
                       std::to_string(block.width) + "x" +
                       std::to_string(block.height));
  }
  const std::vector<float>* blue = block.find(BandName::Blue);
  const std::vector<float>* green = block.find(BandName::Green);
  if (blue == nullptr || green == nullptr) {
    throw BackendError("mock classifier needs blue and green block bands");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < blue->size(); ++i) {
    const double margin = 2.0 * (*blue)[i] - 0.95 * (*green)[i];
    if (margin > 0.0) sum += margin;
  }
  const double mean = sum / static_cast<double>(blue->size());
  const double score = std::clamp(mean / saturation_, 0.0, 1.0);
  return CloudScore{static_cast<float>(score)};
}

std::string SpectralMockClassifier::describe() const {
  std::ostringstream out;
  out << "builtin:spectral(saturation=" << saturation_ << ")";
  return out.str();
}

CloudScore validated_score(CloudScore score, std::string_view backend) {
  if (!std::isfinite(score.value) || score.value < 0.0f || score.value > 1.0f) {
    std::ostringstream why;
    why << "classifier backend " << backend << " returned score "
        << score.value << " outside [0, 1]";
    throw BackendError(why.str());
  }
  return score;
}

}  // namespace specmcd
