#include "linekit/sppcspc.hpp"

#include <stdexcept>
#include <vector>

#include "linekit/checksum.hpp"
#include "linekit/rng.hpp"

namespace linekit {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate_params(const SppcspcParams& p) {
  require(p.in_c > 0 && p.out_c > 0 && p.hidden_c > 0, "sppcspc: channel counts must be positive");
  // An empty kernel list keeps only the identity branch (plain CSP stack).
  int prev = 0;
  for (int k : p.pool_kernels) {
    require(k > 0 && k % 2 == 1, "sppcspc: pool kernels must be odd");
    require(k > prev, "sppcspc: pool kernels must be ascending");
    prev = k;
  }
  const int branches = static_cast<int>(p.pool_kernels.size()) + 1;
  auto check = [](const ConvParams& cv, int in_c, int out_c, int k, const char* msg) {
    if (!(cv.in_c == in_c && cv.out_c == out_c && cv.kh == k && cv.kw == k && cv.same_pad())) {
      throw std::invalid_argument(msg);
    }
  };
  check(p.cv1, p.in_c, p.hidden_c, 1, "sppcspc: cv1 must be 1x1 in_c -> hidden_c, same-pad");
  check(p.cv2, p.in_c, p.hidden_c, 1, "sppcspc: cv2 must be 1x1 in_c -> hidden_c, same-pad");
  check(p.cv3, p.hidden_c, p.hidden_c, 3, "sppcspc: cv3 must be 3x3 hidden_c -> hidden_c, same-pad");
  check(p.cv4, p.hidden_c, p.hidden_c, 1, "sppcspc: cv4 must be 1x1 hidden_c -> hidden_c, same-pad");
  check(p.cv5, branches * p.hidden_c, p.hidden_c, 1,
        "sppcspc: cv5 must be 1x1 (pools+1)*hidden_c -> hidden_c, same-pad");
  check(p.cv6, p.hidden_c, p.hidden_c, 3, "sppcspc: cv6 must be 3x3 hidden_c -> hidden_c, same-pad");
  check(p.cv7, 2 * p.hidden_c, p.out_c, 1, "sppcspc: cv7 must be 1x1 2*hidden_c -> out_c, same-pad");
}

Tensor4 conv_act(const Tensor4& x, const ConvParams& cv, Activation act) {
  return activation(conv2d(x, cv), act);
}

void fill_uniform(std::vector<double>& v, SplitMix64& rng) {
  for (double& x : v) x = rng.uniform(-0.1, 0.1);
}

template <typename Fn>
void visit_params(const SppcspcParams& p, Fn&& fn) {
  for (const ConvParams* cv : {&p.cv1, &p.cv2, &p.cv3, &p.cv4, &p.cv5, &p.cv6, &p.cv7}) {
    fn(cv->weight);
    fn(cv->bias);
  }
}

}  // namespace

SppcspcParams make_sppcspc_params(int in_c, int out_c, int hidden_c, std::vector<int> pool_kernels) {
  SppcspcParams p;
  p.in_c = in_c;
  p.out_c = out_c;
  p.hidden_c = hidden_c < 0 ? out_c : hidden_c;
  p.pool_kernels = std::move(pool_kernels);
  const int branches = static_cast<int>(p.pool_kernels.size()) + 1;
  p.cv1 = make_conv(p.hidden_c, in_c, 1);
  p.cv2 = make_conv(p.hidden_c, in_c, 1);
  p.cv3 = make_conv(p.hidden_c, p.hidden_c, 3, 1, 1);
  p.cv4 = make_conv(p.hidden_c, p.hidden_c, 1);
  p.cv5 = make_conv(p.hidden_c, branches * p.hidden_c, 1);
  p.cv6 = make_conv(p.hidden_c, p.hidden_c, 3, 1, 1);
  p.cv7 = make_conv(out_c, 2 * p.hidden_c, 1);
  validate_params(p);
  return p;
}

SppcspcParams init_sppcspc_params_deterministic(int in_c, int out_c, std::uint64_t seed,
                                                int hidden_c, std::vector<int> pool_kernels) {
  SppcspcParams p = make_sppcspc_params(in_c, out_c, hidden_c, std::move(pool_kernels));
  SplitMix64 rng(seed);
  for (ConvParams* cv : {&p.cv1, &p.cv2, &p.cv3, &p.cv4, &p.cv5, &p.cv6, &p.cv7}) {
    fill_uniform(cv->weight, rng);
    fill_uniform(cv->bias, rng);
  }
  return p;
}

Tensor4 sppcspc_forward(const Tensor4& x, const SppcspcParams& p) {
  validate_params(p);
  require(x.shape().c == p.in_c, "sppcspc_forward: input channels do not match params");

  const Tensor4 a = conv_act(conv_act(conv_act(x, p.cv1, p.act), p.cv3, p.act), p.cv4, p.act);

  std::vector<Tensor4> pyramid;
  pyramid.reserve(p.pool_kernels.size() + 1);
  pyramid.push_back(a);
  for (int k : p.pool_kernels) {
    pyramid.push_back(maxpool2d(a, k, 1, (k - 1) / 2));
  }

  const Tensor4 fused = conv_act(conv_act(concat_channels(pyramid), p.cv5, p.act), p.cv6, p.act);
  const Tensor4 b = conv_act(x, p.cv2, p.act);
  const std::vector<Tensor4> both{fused, b};
  return conv_act(concat_channels(both), p.cv7, p.act);
}

double sppcspc_weights_checksum(const SppcspcParams& p) {
  std::vector<double> all;
  visit_params(p, [&](const std::vector<double>& v) { all.insert(all.end(), v.begin(), v.end()); });
  return weighted_checksum(all);
}

}  // namespace linekit
