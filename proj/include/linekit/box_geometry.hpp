#pragma once

#include <array>

namespace linekit {

// Axis-aligned box in continuous pixel coordinates, corner form.
// Valid boxes have finite coordinates and strictly positive extent.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  static BBox from_corners(double x1, double y1, double x2, double y2);
  static BBox from_center(double cx, double cy, double w, double h);

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double center_x() const { return (x1 + x2) * 0.5; }
  double center_y() const { return (y1 + y2) * 0.5; }
  double area() const { return width() * height(); }

  bool valid() const;
  BBox translated(double dx, double dy) const { return {x1 + dx, y1 + dy, x2 + dx, y2 + dy}; }

  bool operator==(const BBox&) const = default;
};

struct LossConfig {
  double gamma = 0.5;     // focal exponent, >= 0
  double epsilon = 1e-9;  // guard added to the distance/aspect denominators, > 0
};

struct LossOutput {
  double value = 0.0;
  // Partial derivatives of value w.r.t. the predicted box (x1, y1, x2, y2).
  std::array<double, 4> grad{0.0, 0.0, 0.0, 0.0};
};

// Intersection over union, in [0, 1]. Symmetric. Throws std::invalid_argument
// on an invalid box.
double iou(const BBox& a, const BBox& b);

// Smallest axis-aligned box containing both inputs.
BBox enclosing_box(const BBox& a, const BBox& b);

// (1 - IoU) + center-distance term + width/height difference terms:
//
//   value = 1 - IoU
//         + dist2(centers) / (wc^2 + hc^2 + eps)
//         + (w - w_gt)^2 / (wc^2 + eps)
//         + (h - h_gt)^2 / (hc^2 + eps)
//
// where (wc, hc) are the enclosing-box extents. The width/height terms use
// squared denominators so every term is dimensionless. grad is the exact
// analytic gradient w.r.t. pred's corners; at min/max argument ties the
// pred-active one-sided derivative is taken, except that coincident boxes
// return the zero subgradient (the loss is at its global minimum there).
LossOutput eiou_loss(const BBox& pred, const BBox& gt, const LossConfig& cfg = {});

// IoU^gamma * eiou_loss, differentiated through both factors. gamma = 0
// reduces exactly to eiou_loss. Disjoint boxes with gamma > 0 yield zero
// value and zero gradient.
LossOutput focal_eiou_loss(const BBox& pred, const BBox& gt, const LossConfig& cfg = {});

}  // namespace linekit
