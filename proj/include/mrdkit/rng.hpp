#pragma once

#include <cmath>
#include <cstdint>

namespace mrdkit {

// SplitMix64 (Steele, Lea & Flood 2014): a counter-based 64-bit generator.
// The state advances by the golden-ratio increment and each output is a fixed
// avalanche hash of the counter, so sequences are reproducible bit-for-bit on
// any platform. Normals come from Box-Muller on two 53-bit uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal. Box-Muller, both values of the pair are consumed.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double radius = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), never log(0)
    double angle = 2.0 * M_PI * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Independent stream for (seed, index) pairs, e.g. per-trial or per-restart.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    return g.next_u64();
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace mrdkit
