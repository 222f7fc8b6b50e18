#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace tpp {

/// 53-bit uniform draw in [0,1). Hand-scaled instead of
/// std::uniform_real_distribution so streams are identical across standard
/// library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Fisher-Yates shuffle of 0..n-1 with a portable draw sequence.
inline std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

} // namespace tpp
