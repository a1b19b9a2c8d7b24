#pragma once

#include <span>

namespace linekit {

// Position-weighted sum: sum of v[i] * (1 + 1e-3 * (i mod 1000)). Sensitive
// to value changes and to reorderings, cheap, and bit-reproducible (fixed
// accumulation order).
inline double weighted_checksum(std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    acc += v[i] * (1.0 + 1e-3 * static_cast<double>(i % 1000));
  }
  return acc;
}

}  // namespace linekit
