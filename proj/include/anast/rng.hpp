#pragma once

#include <cstdint>
#include <string_view>

namespace anast {

// SplitMix64 (Steele, Lea & Flood; the java.util.SplittableRandom finalizer).
// A counter-based generator: output i is a pure function of seed + i, so
// streams are reproducible across platforms and independent of call pattern.
// All seeded behavior in this library (projectors, synthetic data, splits)
// draws from this generator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Standard normal deviates via Box-Muller over a SplitMix64 stream. Each
// uniform pair yields two deviates; the spare is cached, so draw order is
// fixed by construction.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next();

 private:
  SplitMix64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a, used to derive label-keyed sub-seeds so per-class streams do not
// depend on enumeration order.
std::uint64_t fnv1a64(std::string_view text);

// Deterministic sub-stream seed from a parent seed and a stream key.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(key));
}

}  // namespace anast
