#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linekit/box_geometry.hpp"
#include "linekit/sppcspc.hpp"
#include "linekit/tensor.hpp"

namespace linekit {

struct GradientCheckResult {
  double max_rel_err = 0.0;
  int checked = 0;  // pairs actually compared
  int skipped = 0;  // pairs excluded near min/max argument ties
};

// Compares the analytic gradients of both losses against central finite
// differences (step 1e-6) on seeded random valid box pairs in [0, 64]^2.
// The relative error uses denominator max(1, |analytic|, |numeric|). Pairs
// with any corner pair or raw overlap extent within 1e-4 of a tie are
// excluded (the losses are non-differentiable there).
GradientCheckResult gradient_check(int pairs, std::uint64_t seed, double gamma);

// Frozen reference configurations for the golden-output checks. The expected
// checksums were produced once by independent nested-loop reference kernels
// (see tests) and are pinned here.
inline constexpr std::uint64_t kGamGoldenSeed = 0;
inline constexpr int kGamGoldenChannels = 8;
inline constexpr int kGamGoldenReduction = 4;
inline constexpr int kGamGoldenKernel = 7;
inline constexpr std::uint64_t kSppcspcGoldenSeed = 0;
inline constexpr int kSppcspcGoldenInC = 4;
inline constexpr int kSppcspcGoldenOutC = 8;
// Inputs: uniform in [-1, 1] from the portable generator with seed 1.
inline constexpr std::uint64_t kGoldenInputSeed = 1;
inline constexpr Shape4 kGamGoldenInputShape{1, 8, 8, 8};
inline constexpr Shape4 kSppcspcGoldenInputShape{1, 4, 8, 8};

extern const double kGamGoldenChecksum;
extern const double kSppcspcGoldenChecksum;
extern const double kSppcspcGoldenWeightsChecksum;

// The golden forward passes, reproduced from the pinned configurations.
double gam_golden_forward_checksum();
double sppcspc_golden_forward_checksum();
double sppcspc_golden_weights_checksum();

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Golden-checksum verification plus seed-driven structural invariants for
// the attention and pyramid blocks.
std::vector<CheckLine> module_checks(std::uint64_t seed);

}  // namespace linekit
