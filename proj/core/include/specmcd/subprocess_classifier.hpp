#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "specmcd/classifier.hpp"

namespace specmcd {

// Wire protocol, one frame per block:
//   request:  "SMCD" | u32le width | u32le height | u32le band count |
//             band-major float32le samples
//   response: "SMCR" | float32le score
// Workers answer one response per request, in order, and live for the whole
// run.
inline constexpr char kRequestMagic[4] = {'S', 'M', 'C', 'D'};
inline constexpr char kResponseMagic[4] = {'S', 'M', 'C', 'R'};

std::vector<std::uint8_t> encode_request_frame(const Block& block);

struct SubprocessOptions {
  int workers = 1;
  double timeout_seconds = 30.0;  // per frame
};

// Runs one or more worker processes spawned from a shell command line and
// dispatches blocks to them round-robin. classify() is thread-safe; each
// worker pipe is serialized behind its own lock.
class SubprocessClassifier final : public Classifier {
 public:
  SubprocessClassifier(std::string command_line, SubprocessOptions options = {});
  ~SubprocessClassifier() override;

  SubprocessClassifier(const SubprocessClassifier&) = delete;
  SubprocessClassifier& operator=(const SubprocessClassifier&) = delete;

  CloudScore classify(const Block& block) const override;
  std::string describe() const override;

 private:
  struct Worker;

  std::string command_line_;
  SubprocessOptions options_;
  mutable std::vector<std::unique_ptr<Worker>> workers_;
  mutable std::atomic<std::size_t> next_worker_{0};
};

}  // namespace specmcd
