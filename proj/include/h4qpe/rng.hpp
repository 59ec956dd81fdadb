#pragma once

#include <cstdint>
#include <limits>

namespace h4qpe {

/// Counter-based 64-bit generator: output k is the SplitMix64 finalizer
/// applied to seed + k * golden-gamma. Streams are reproducible from
/// (seed, counter) alone, so any draw can be replayed.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(seed_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent per-task seed derived from a master seed.
  static constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    return mix(mix(master) ^ (stream * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
  }

private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

} // namespace h4qpe
