// Reproducible random streams: mt19937_64 with distributions derived from
// the raw 64-bit output, independent of the standard library's distributions.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace aoi2d {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }
  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

/// SplitMix64 finalizer; derives independent child seeds from (master, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace aoi2d
