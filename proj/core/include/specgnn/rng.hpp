#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specgnn {

/// splitmix64 mix step; used to derive independent seed streams from a base
/// seed plus stream ids, so sub-runs (epochs, trials) replay independently.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_a,
                                 std::uint64_t stream_b = 0) {
  return splitmix64(splitmix64(base ^ 0xA5A5A5A5A5A5A5A5ull) + splitmix64(stream_a) +
                    0x9E3779B97F4A7C15ull * (stream_b + 1));
}

/// Seeded generator on top of std::mt19937_64 (the engine's output sequence
/// is pinned by the standard). Distributions are implemented here rather than
/// with std::*_distribution so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;  // hi >= lo assumed; range 0 means full span
    if (range == 0) return engine_();
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % range);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return lo + v % range;
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, n - 1)); }

  /// Standard normal via Box-Muller (cosine branch only).
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(0, i - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace specgnn
