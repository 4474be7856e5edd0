#pragma once

#include <cstdint>

namespace catprep {

// splitmix64 (Steele/Lea/Flood). Small, fast, and fully deterministic across
// platforms, which the reproducibility contract of this project relies on.
// Per-shot streams are derived by mixing the seed with the stream index, so
// simulation results are independent of how shots are partitioned over
// threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Modulo bias is below 2^-57 for the tiny
  // bounds used here.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

  bool bernoulli(double p) { return p > 0.0 && next_double() < p; }

 private:
  std::uint64_t state_;
};

inline SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mixer(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return SplitMix64(mixer.next());
}

}  // namespace catprep
