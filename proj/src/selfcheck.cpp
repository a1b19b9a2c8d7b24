#include "linekit/selfcheck.hpp"

#include <cmath>
#include <cstdio>

#include "linekit/checksum.hpp"
#include "linekit/gam.hpp"
#include "linekit/rng.hpp"

namespace linekit {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kTieMargin = 1e-4;

BBox random_box(SplitMix64& rng) {
  const double x1 = rng.uniform(0.0, 44.0);
  const double y1 = rng.uniform(0.0, 44.0);
  const double w = rng.uniform(0.5, 20.0);
  const double h = rng.uniform(0.5, 20.0);
  return {x1, y1, x1 + w, y1 + h};
}

bool near_tie(const BBox& p, const BBox& g) {
  if (std::abs(p.x1 - g.x1) < kTieMargin || std::abs(p.y1 - g.y1) < kTieMargin ||
      std::abs(p.x2 - g.x2) < kTieMargin || std::abs(p.y2 - g.y2) < kTieMargin) {
    return true;
  }
  // Raw overlap extents crossing zero are the touching-boxes kink.
  const double iw = std::min(p.x2, g.x2) - std::max(p.x1, g.x1);
  const double ih = std::min(p.y2, g.y2) - std::max(p.y1, g.y1);
  return std::abs(iw) < kTieMargin || std::abs(ih) < kTieMargin;
}

BBox nudged(BBox b, int coord, double delta) {
  switch (coord) {
    case 0: b.x1 += delta; break;
    case 1: b.y1 += delta; break;
    case 2: b.x2 += delta; break;
    default: b.y2 += delta; break;
  }
  return b;
}

template <typename LossFn>
double max_grad_error(const BBox& pred, const BBox& gt, const LossConfig& cfg, LossFn&& loss) {
  const LossOutput analytic = loss(pred, gt, cfg);
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    const double up = loss(nudged(pred, t, kFdStep), gt, cfg).value;
    const double down = loss(nudged(pred, t, -kFdStep), gt, cfg).value;
    const double numeric = (up - down) / (2.0 * kFdStep);
    const double denom = std::max({1.0, std::abs(analytic.grad[t]), std::abs(numeric)});
    worst = std::max(worst, std::abs(analytic.grad[t] - numeric) / denom);
  }
  return worst;
}

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string detail_vs(double got, double want) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "got %.12g, expected %.12g", got, want);
  return buf;
}

}  // namespace

GradientCheckResult gradient_check(int pairs, std::uint64_t seed, double gamma) {
  SplitMix64 rng(seed);
  LossConfig cfg;
  cfg.gamma = gamma;

  GradientCheckResult res;
  for (int i = 0; i < pairs; ++i) {
    const BBox pred = random_box(rng);
    const BBox gt = random_box(rng);
    if (near_tie(pred, gt)) {
      ++res.skipped;
      continue;
    }
    ++res.checked;
    res.max_rel_err = std::max(
        res.max_rel_err, max_grad_error(pred, gt, cfg, [](const BBox& p, const BBox& g, const LossConfig& c) {
          return eiou_loss(p, g, c);
        }));
    res.max_rel_err = std::max(
        res.max_rel_err, max_grad_error(pred, gt, cfg, [](const BBox& p, const BBox& g, const LossConfig& c) {
          return focal_eiou_loss(p, g, c);
        }));
  }
  return res;
}

double gam_golden_forward_checksum() {
  const GamParams params = init_gam_params_deterministic(kGamGoldenChannels, kGamGoldenReduction,
                                                         kGamGoldenKernel, kGamGoldenSeed);
  const Tensor4 input = random_tensor(kGamGoldenInputShape, kGoldenInputSeed, -1.0, 1.0);
  return weighted_checksum(gam_forward(input, params).data());
}

double sppcspc_golden_forward_checksum() {
  const SppcspcParams params =
      init_sppcspc_params_deterministic(kSppcspcGoldenInC, kSppcspcGoldenOutC, kSppcspcGoldenSeed);
  const Tensor4 input = random_tensor(kSppcspcGoldenInputShape, kGoldenInputSeed, -1.0, 1.0);
  return weighted_checksum(sppcspc_forward(input, params).data());
}

double sppcspc_golden_weights_checksum() {
  return sppcspc_weights_checksum(
      init_sppcspc_params_deterministic(kSppcspcGoldenInC, kSppcspcGoldenOutC, kSppcspcGoldenSeed));
}

std::vector<CheckLine> module_checks(std::uint64_t seed) {
  std::vector<CheckLine> lines;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    lines.push_back({name, pass, detail});
  };

  // Frozen golden outputs.
  {
    const double got = gam_golden_forward_checksum();
    add("gam golden forward checksum", approx(got, kGamGoldenChecksum, 1e-9),
        detail_vs(got, kGamGoldenChecksum));
  }
  {
    const double got = sppcspc_golden_forward_checksum();
    add("sppcspc golden forward checksum", approx(got, kSppcspcGoldenChecksum, 1e-9),
        detail_vs(got, kSppcspcGoldenChecksum));
  }
  {
    const double got = sppcspc_golden_weights_checksum();
    add("sppcspc golden weights checksum", approx(got, kSppcspcGoldenWeightsChecksum, 1e-9),
        detail_vs(got, kSppcspcGoldenWeightsChecksum));
  }

  // Seed-driven structural invariants.
  SplitMix64 rng(seed);
  {
    const int reduction = 2 + static_cast<int>(rng.uniform_int(3));      // 2..4
    const int channels = reduction * (1 + static_cast<int>(rng.uniform_int(3)));
    const int h = 3 + static_cast<int>(rng.uniform_int(6));
    const int w = 3 + static_cast<int>(rng.uniform_int(6));
    const Tensor4 x = random_tensor({1, channels, h, w}, rng.next_u64(), -2.0, 2.0);

    const GamParams zero = make_gam_params(channels, reduction, 3);
    const Tensor4 ca = channel_attention(x, zero);
    const Tensor4 full = gam_forward(x, zero);
    bool half_ok = true, quarter_ok = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      half_ok = half_ok && ca.data()[i] == 0.5 * x.data()[i];
      quarter_ok = quarter_ok && full.data()[i] == 0.25 * x.data()[i];
    }
    add("gam zero-weight channel gate scales by exactly 0.5", half_ok);
    add("gam zero-weight full pass scales by exactly 0.25", quarter_ok);

    const GamParams rnd = init_gam_params_deterministic(channels, reduction, 3, rng.next_u64());
    add("gam preserves shape", gam_forward(x, rnd).shape() == x.shape());
  }
  {
    const int in_c = 1 + static_cast<int>(rng.uniform_int(4));
    const int out_c = 1 + static_cast<int>(rng.uniform_int(4));
    const int h = 4 + static_cast<int>(rng.uniform_int(5));
    const int w = 4 + static_cast<int>(rng.uniform_int(5));
    const SppcspcParams params = init_sppcspc_params_deterministic(in_c, out_c, rng.next_u64());
    const Tensor4 x = random_tensor({1, in_c, h, w}, rng.next_u64(), -2.0, 2.0);
    const Tensor4 y = sppcspc_forward(x, params);
    add("sppcspc preserves spatial dims and maps to out_c channels",
        y.shape() == Shape4{1, out_c, h, w});
  }
  return lines;
}

}  // namespace linekit
