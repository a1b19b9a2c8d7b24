#pragma once

#include <cstdint>

namespace linekit {

// SplitMix64 finalizer (Steele/Lea/Flood reference constants). All randomness
// in this project flows through this mix so streams reproduce bit-exactly
// across platforms and language ports.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n), n > 0. Plain modulo; the bias is irrelevant at the
  // counts used here and keeps the stream portable.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  bool coin() { return (next_u64() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

// Derives an independent per-item seed from (seed, a, b). Item streams depend
// only on their own indices, so work can be reordered or parallelized without
// changing any output.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(seed ^ mix64(a ^ mix64(b ^ 0x5851f42d4c957f2dull)));
}

}  // namespace linekit
