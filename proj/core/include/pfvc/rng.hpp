#pragma once

#include <cstdint>

namespace pfvc {

// Counter-based generator: the n-th output is a pure function of
// (seed, n), computed with the SplitMix64 finalizer. The state is a plain
// value, so draws are reproducible on every platform and a stream can be
// forked without touching the parent.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed = 0, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n must be > 0. Rejection keeps the
  // distribution exact.
  std::uint64_t next_below(std::uint64_t n) noexcept;

  // Independent child stream; the parent advances by one draw.
  constexpr CounterRng split() noexcept { return CounterRng(mix(next_u64() ^ 0xD1B54A32D192ED03ULL)); }

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

  friend constexpr bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

inline std::uint64_t CounterRng::next_below(std::uint64_t n) noexcept {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

}  // namespace pfvc
