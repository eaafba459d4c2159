#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace svdd {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seedable, platform-independent randomness. mt19937_64 output is fixed by
// the standard; every draw below is built on raw 64-bit outputs, avoiding
// the implementation-defined std distributions and std::shuffle.
// (seed, stream, substream) are whitened through splitmix64 so nearby
// seeds give unrelated sequences.
class DeterministicRng {
public:
  explicit DeterministicRng(std::uint64_t seed, std::uint64_t stream = 0,
                            std::uint64_t substream = 0) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= 0x517cc1b727220a95ULL + stream;
    std::uint64_t b = splitmix64(state);
    state ^= 0x2545f4914f6cdd1dULL + substream;
    std::uint64_t c = splitmix64(state);
    engine_.seed(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ (c << 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n) by rejection.
  std::size_t uniform_below(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    // Box-Muller; draws a fresh pair every call.
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    // Fisher-Yates with the unbiased draw above.
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_below(i)]);
    }
  }

  static constexpr const char* algorithm() {
    return "mt19937_64 seeded via splitmix64(seed, repetition, class)";
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace svdd
