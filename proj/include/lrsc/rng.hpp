#pragma once

// Counter-based 64-bit generator (SplitMix64).  The state is a plain
// counter advanced by the golden-gamma constant; each output applies the
// finalizer below to the counter, so draw k is a pure function of
// (seed, k).  That makes streams trivially reproducible and lets the
// sweep harness derive independent per-trial seeds by remixing.
//
//   z  = seed + (k+1) * 0x9E3779B97F4A7C15
//   z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
//   z ^= z >> 27;  z *= 0x94D049BB133111EB
//   out = z ^ (z >> 31)

#include <cstdint>

namespace lrsc {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stable combiner used for seed derivation: folds b into a and finalizes.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a + 0x9E3779B97F4A7C15ull * (b + 1));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return next() % m; }

 private:
  std::uint64_t state_;
};

}  // namespace lrsc
