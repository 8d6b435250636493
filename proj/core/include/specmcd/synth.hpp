#pragma once

#include <cstdint>
#include <string>

#include "specmcd/raster.hpp"

namespace specmcd {

// Two scene families: scattered bright blobs with crisp interiors, and one
// broad translucent field with no hard boundary. Together they exercise both
// ends of the regime switch.
enum class SceneKind { Dense, LargeArea };

std::string_view to_string(SceneKind kind);
SceneKind parse_scene_kind(std::string_view text);

struct ScenePreset {
  SceneKind kind = SceneKind::Dense;
  int width = 1024;
  int height = 1024;
  std::uint64_t seed = 1;
  int distractors = 0;

  void validate() const;
};

struct SyntheticScene {
  MultibandRaster raster;
  BinaryMask truth;
  // Pixels belonging to the bright non-cloud squares; useful for asserting
  // that a detector rejected them.
  BinaryMask distractor_footprint;
  // Generator parameters serialized as JSON, suitable for writing next to
  // the raster container.
  std::string manifest_json;
};

// Deterministic for a fixed preset: identical bytes on every call.
SyntheticScene generate_scene(const ScenePreset& preset);

}  // namespace specmcd
