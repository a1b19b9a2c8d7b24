#include "linekit/gam.hpp"

#include <stdexcept>
#include <utility>

#include "linekit/rng.hpp"

namespace linekit {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate_params(const GamParams& p) {
  require(p.channels > 0 && p.reduction > 0, "gam: channels and reduction must be positive");
  require(p.channels % p.reduction == 0, "gam: reduction must divide the channel count");
  const int hidden = p.channels / p.reduction;
  require(p.mlp_w1.rows == p.channels && p.mlp_w1.cols == hidden, "gam: mlp_w1 must be c x c/r");
  require(p.mlp_w2.rows == hidden && p.mlp_w2.cols == p.channels, "gam: mlp_w2 must be c/r x c");
  require(p.mlp_b1.size() == static_cast<std::size_t>(hidden), "gam: mlp_b1 must have c/r entries");
  require(p.mlp_b2.size() == static_cast<std::size_t>(p.channels), "gam: mlp_b2 must have c entries");
  require(p.conv1.in_c == p.channels && p.conv1.out_c == hidden, "gam: conv1 must map c -> c/r");
  require(p.conv2.in_c == hidden && p.conv2.out_c == p.channels, "gam: conv2 must map c/r -> c");
  require(p.conv1.same_pad() && p.conv2.same_pad(), "gam: spatial convs must be stride-1 same-pad");
}

Tensor4 elementwise_mul(const Tensor4& gate, const Tensor4& x) {
  Tensor4 y = x;
  auto g = gate.data();
  auto out = y.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= g[i];
  return y;
}

void fill_uniform(std::vector<double>& v, SplitMix64& rng) {
  for (double& x : v) x = rng.uniform(-0.1, 0.1);
}

}  // namespace

GamParams make_gam_params(int channels, int reduction, int kernel) {
  require(channels > 0 && reduction > 0 && channels % reduction == 0,
          "gam params: reduction must divide channels");
  require(kernel > 0 && kernel % 2 == 1, "gam params: spatial kernel must be odd");
  const int hidden = channels / reduction;
  GamParams p;
  p.channels = channels;
  p.reduction = reduction;
  p.mlp_w1 = Matrix(channels, hidden);
  p.mlp_b1.assign(hidden, 0.0);
  p.mlp_w2 = Matrix(hidden, channels);
  p.mlp_b2.assign(channels, 0.0);
  p.conv1 = make_conv(hidden, channels, kernel, 1, (kernel - 1) / 2);
  p.conv2 = make_conv(channels, hidden, kernel, 1, (kernel - 1) / 2);
  return p;
}

GamParams init_gam_params_deterministic(int channels, int reduction, int kernel, std::uint64_t seed) {
  GamParams p = make_gam_params(channels, reduction, kernel);
  SplitMix64 rng(seed);
  fill_uniform(p.mlp_w1.data, rng);
  fill_uniform(p.mlp_b1, rng);
  fill_uniform(p.mlp_w2.data, rng);
  fill_uniform(p.mlp_b2, rng);
  fill_uniform(p.conv1.weight, rng);
  fill_uniform(p.conv1.bias, rng);
  fill_uniform(p.conv2.weight, rng);
  fill_uniform(p.conv2.bias, rng);
  return p;
}

Tensor4 channel_attention(const Tensor4& f1, const GamParams& p) {
  validate_params(p);
  const Shape4& s = f1.shape();
  require(s.c == p.channels, "channel_attention: input channels do not match params");

  // NHWC puts the channel axis contiguous, so the tensor doubles as an
  // (n*h*w) x c matrix of per-position channel vectors.
  Tensor4 nhwc = permute(f1, {0, 2, 3, 1});
  const int positions = s.n * s.h * s.w;
  Matrix m(positions, s.c, std::vector<double>(nhwc.data().begin(), nhwc.data().end()));

  Matrix hidden = dense(m, p.mlp_w1, p.mlp_b1);
  for (double& v : hidden.data) v = apply_activation(v, Activation::Relu);
  Matrix out = dense(hidden, p.mlp_w2, p.mlp_b2);

  Tensor4 gate({s.n, s.h, s.w, s.c}, std::move(out.data));
  gate = permute(gate, {0, 3, 1, 2});
  gate = activation(gate, Activation::Sigmoid);
  return elementwise_mul(gate, f1);
}

Tensor4 spatial_attention(const Tensor4& f2, const GamParams& p) {
  validate_params(p);
  require(f2.shape().c == p.channels, "spatial_attention: input channels do not match params");

  Tensor4 gate = activation(conv2d(f2, p.conv1), Activation::Relu);
  gate = activation(conv2d(gate, p.conv2), Activation::Sigmoid);
  return elementwise_mul(gate, f2);
}

Tensor4 gam_forward(const Tensor4& f1, const GamParams& p) {
  return spatial_attention(channel_attention(f1, p), p);
}

}  // namespace linekit
