#pragma once

#include <cstdint>
#include <vector>

#include "linekit/tensor.hpp"

namespace linekit {

// Weights for the global attention block: a per-position channel MLP
// (encode to c/r, decode back to c) and a two-conv spatial gate.
struct GamParams {
  int channels = 0;   // c
  int reduction = 0;  // r, must divide c
  Matrix mlp_w1;      // c x c/r
  std::vector<double> mlp_b1;
  Matrix mlp_w2;      // c/r x c
  std::vector<double> mlp_b2;
  ConvParams conv1;   // c -> c/r, k x k, same pad
  ConvParams conv2;   // c/r -> c, k x k, same pad
};

// All-zero weights (gates come out at exactly 0.5 everywhere).
GamParams make_gam_params(int channels, int reduction = 4, int kernel = 7);

// Weights drawn uniformly from [-0.1, 0.1] with the portable generator, in a
// fixed fill order (mlp_w1, mlp_b1, mlp_w2, mlp_b2, conv1 w/b, conv2 w/b).
GamParams init_gam_params_deterministic(int channels, int reduction, int kernel, std::uint64_t seed);

// Channel gate: permute NCHW -> NHWC, run the two-layer MLP over channels at
// every position (relu between layers), permute back, sigmoid, and scale the
// input elementwise by the gate. Shape preserved.
Tensor4 channel_attention(const Tensor4& f1, const GamParams& p);

// Spatial gate: conv (c -> c/r) + relu, conv (c/r -> c), sigmoid, elementwise
// scale. Both convs must be stride-1 same-pad. Shape preserved.
Tensor4 spatial_attention(const Tensor4& f2, const GamParams& p);

// Channel gate followed by spatial gate.
Tensor4 gam_forward(const Tensor4& f1, const GamParams& p);

}  // namespace linekit
