#pragma once

#include <cstdint>

namespace specmcd {

// Deterministic generator built on the splitmix64 finalizer. Pure integer
// arithmetic, so streams are identical on every platform and toolchain;
// std::random distributions are deliberately avoided because their output is
// implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  // Derives an independent child stream; used to give each scene element its
  // own counter sequence regardless of generation order.
  SplitMix64 split(std::uint64_t tag) {
    SplitMix64 mixer(state_ ^ (tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

// Stateless lattice hash for procedural noise: same (seed, tag, x, y) always
// yields the same 64-bit value.
inline std::uint64_t lattice_hash(std::uint64_t seed, std::uint64_t tag,
                                  std::int64_t x, std::int64_t y) {
  std::uint64_t z = seed;
  z ^= 0x9e3779b97f4a7c15ULL + tag + (z << 6) + (z >> 2);
  z ^= 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(x) + (z << 6) + (z >> 2);
  z ^= 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(y) + (z << 6) + (z >> 2);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double lattice_uniform(std::uint64_t seed, std::uint64_t tag,
                              std::int64_t x, std::int64_t y) {
  return static_cast<double>(lattice_hash(seed, tag, x, y) >> 11) * 0x1.0p-53;
}

}  // namespace specmcd
