#pragma once

#include <cstdint>
#include <random>
#include <vector>

// All randomness in the project flows through these helpers. mt19937_64 has a
// standardized output sequence, and the bounded draws below avoid
// std::uniform_*_distribution, whose output is implementation-defined. The
// same seed therefore yields the same stream on every platform.

namespace semrob::rng {

using Engine = std::mt19937_64;

// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
inline std::uint64_t below(Engine& eng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * unit(eng);
}

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(below(eng, i));
    std::swap(values[i - 1], values[j]);
  }
}

// k distinct values from [0, n), returned sorted ascending. Floyd's method,
// so the cost is O(k log k) regardless of n.
std::vector<std::uint64_t> sample_distinct(Engine& eng, std::uint64_t n, std::uint64_t k);

}  // namespace semrob::rng
