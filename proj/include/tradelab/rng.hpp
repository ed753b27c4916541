#pragma once

#include <cstdint>
#include <random>

namespace tradelab {

/// SplitMix64 finalizer; used to derive independent seeds from
/// (master_seed, index) without depending on scheduling order.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Random stream handed to samplers and strategies. Draws are bit-identical
/// across platforms: uniform() takes the top 53 bits of mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo,hi].
  double uniform(double lo, double hi) {
    const double x = lo + (hi - lo) * uniform();
    return x > hi ? hi : x;
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next_u64() { return engine_(); }

  /// Independent child stream.
  Rng split() { return Rng(mix_seed(engine_(), 0)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tradelab
