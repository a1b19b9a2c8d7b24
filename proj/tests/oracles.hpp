#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from the definitions (flat loops,
// explicit index math) rather than reusing the library's kernels.

#include <cstdint>
#include <vector>

#include "linekit/box_geometry.hpp"
#include "linekit/evaluation.hpp"
#include "linekit/gam.hpp"
#include "linekit/sppcspc.hpp"
#include "linekit/tensor.hpp"

namespace oracle {

// Naive kernels with the same fixed accumulation order the library mandates
// (in-channel outer, then ky, then kx), so agreement is bit-exact.
linekit::Tensor4 conv2d(const linekit::Tensor4& x, const linekit::ConvParams& p);
linekit::Tensor4 maxpool2d(const linekit::Tensor4& x, int k, int stride, int pad);

// Attention blocks computed position by position, no permutes or matrices.
linekit::Tensor4 channel_attention(const linekit::Tensor4& x, const linekit::GamParams& p);
linekit::Tensor4 spatial_attention(const linekit::Tensor4& x, const linekit::GamParams& p);
linekit::Tensor4 gam_forward(const linekit::Tensor4& x, const linekit::GamParams& p);

// The pyramid block rebuilt from the naive kernels above.
linekit::Tensor4 sppcspc_forward(const linekit::Tensor4& x, const linekit::SppcspcParams& p);

// Rasterized measurement of two integer-corner boxes in [0, 64]^2. The grid
// covers their enclosing region with at most 1000 cells per axis; the pitch
// is an integer number of cells per unit, so box edges lie on cell
// boundaries and counting cell centers measures every quantity exactly.
struct GridMeasurement {
  double iou = 0.0;
  double inter_area = 0.0;
  double union_area = 0.0;
  double a_center_x = 0.0, a_center_y = 0.0;
  double b_center_x = 0.0, b_center_y = 0.0;
  double a_w = 0.0, a_h = 0.0, b_w = 0.0, b_h = 0.0;
  double enclosing_w = 0.0, enclosing_h = 0.0;
};
GridMeasurement grid_measure(const linekit::BBox& a, const linekit::BBox& b);

// Greedy suppression written as a direct O(n^2) transcription of the rule.
std::vector<linekit::Detection> nms(const std::vector<linekit::Detection>& dets, double iou_thresh);

// Exhaustive re-derivation of the evaluator on small inputs.
struct EvalSummary {
  std::vector<std::array<double, 10>> class_ap;  // per class, per threshold
  std::vector<std::size_t> tp, fp, fn;           // per class at the operating point
  double map50 = 0.0, map5095 = 0.0;             // NaN when undefined
};
EvalSummary evaluate(const std::vector<linekit::Detection>& dets,
                     const std::vector<linekit::GroundTruth>& gts, int n_classes,
                     double conf_threshold);

}  // namespace oracle
