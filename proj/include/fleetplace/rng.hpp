#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace fleetplace {

// Every seeded behaviour in the library draws from mt19937_64 through the
// helpers below. The engine's output sequence is fixed by the standard;
// std::uniform_*_distribution is not, so it must never be used here.
// Changing any of this changes every seeded result in the project.
using Rng = std::mt19937_64;

// Uniform integer in [0, n), n > 0. Rejection keeps the draw unbiased.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller.
double standard_normal(Rng& rng);

// In-place Fisher-Yates.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// Random permutation of 0..n-1.
std::vector<int> random_permutation(int n, Rng& rng);

}  // namespace fleetplace
