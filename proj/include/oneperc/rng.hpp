#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace oneperc {

// All randomness flows through mt19937_64 with hand-rolled helpers below, so
// results are bit-identical across standard libraries (std distributions are
// not portable). Reports record the algorithm id.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double rng_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline std::uint64_t rng_below(Rng& rng, std::uint64_t n) {
  return rng() % n;
}

inline bool rng_bernoulli(Rng& rng, double p) { return rng_uniform(rng) < p; }

template <typename T>
void rng_shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng_below(rng, i)]);
  }
}

}  // namespace oneperc
