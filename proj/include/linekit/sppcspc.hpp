#pragma once

#include <cstdint>
#include <vector>

#include "linekit/tensor.hpp"

namespace linekit {

// Weights for the CSP spatial-pyramid block. One branch runs
// cv1 -> cv3 -> cv4, a multi-scale max-pool pyramid (identity plus one pool
// per kernel), then cv5 -> cv6; the other branch is a single cv2. The two
// are concatenated and fused by cv7. All convs are stride-1 same-pad, so
// spatial dims are preserved end to end.
struct SppcspcParams {
  int in_c = 0, out_c = 0, hidden_c = 0;
  std::vector<int> pool_kernels{5, 9, 13};  // ascending, odd
  Activation act = Activation::Silu;        // applied after every conv
  ConvParams cv1;  // 1x1 in_c -> hidden_c
  ConvParams cv2;  // 1x1 in_c -> hidden_c
  ConvParams cv3;  // 3x3 hidden_c -> hidden_c
  ConvParams cv4;  // 1x1 hidden_c -> hidden_c
  ConvParams cv5;  // 1x1 (|pools|+1)*hidden_c -> hidden_c
  ConvParams cv6;  // 3x3 hidden_c -> hidden_c
  ConvParams cv7;  // 1x1 2*hidden_c -> out_c
};

// Zero weights with the wiring above. hidden_c < 0 means hidden_c = out_c.
SppcspcParams make_sppcspc_params(int in_c, int out_c, int hidden_c = -1,
                                  std::vector<int> pool_kernels = {5, 9, 13});

// Weights drawn uniformly from [-0.1, 0.1] with the portable generator, in a
// fixed fill order (cv1..cv7, each weight then bias). Identical seeds give
// identical parameters on every platform.
SppcspcParams init_sppcspc_params_deterministic(int in_c, int out_c, std::uint64_t seed,
                                                int hidden_c = -1,
                                                std::vector<int> pool_kernels = {5, 9, 13});

Tensor4 sppcspc_forward(const Tensor4& x, const SppcspcParams& p);

// Position-weighted checksum of all weights and biases in fill order.
double sppcspc_weights_checksum(const SppcspcParams& p);

}  // namespace linekit
