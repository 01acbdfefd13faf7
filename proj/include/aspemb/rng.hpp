#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace aspemb {

// SplitMix64 finalizer. Used to derive independent sub-seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sub-seed for a named stage (and optional index) of a run seeded with `base`.
// derive_seed(s, tag, i) = splitmix64(splitmix64(s ^ fnv1a64(tag)) + i)
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                    std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(base ^ fnv1a64(tag)) + index);
}

// Portable random stream: MT19937-64 with explicitly specified conversions, so
// every draw is reproducible across standard libraries (std distributions are
// not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Strictly inside (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection; n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aspemb
