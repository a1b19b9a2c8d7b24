#include "linekit/box_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace linekit {

namespace {

void require_valid(const BBox& b, const char* who) {
  if (!b.valid()) {
    throw std::invalid_argument(std::string(who) + ": invalid box (needs finite coords, x2 > x1, y2 > y1)");
  }
}

void require_config(const LossConfig& cfg) {
  if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) {
    throw std::invalid_argument("loss config: gamma must be finite and >= 0");
  }
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
    throw std::invalid_argument("loss config: epsilon must be finite and > 0");
  }
}

// Everything eiou needs, plus IoU and its gradient for the focal factor.
struct EiouParts {
  double value = 0.0;
  std::array<double, 4> grad{};
  double iou = 0.0;
  std::array<double, 4> diou{};
};

// Gradient index order: 0=x1, 1=y1, 2=x2, 3=y2 of the predicted box.
EiouParts eiou_parts(const BBox& p, const BBox& g, const LossConfig& cfg) {
  EiouParts out;

  const double w = p.width(), h = p.height();
  const double wg = g.width(), hg = g.height();

  // Intersection. At coordinate ties the pred-side branch is taken; the raw
  // (unclamped) overlap going non-positive zeroes the intersection gradient.
  const double iw_raw = std::min(p.x2, g.x2) - std::max(p.x1, g.x1);
  const double ih_raw = std::min(p.y2, g.y2) - std::max(p.y1, g.y1);
  const double iw = std::max(iw_raw, 0.0);
  const double ih = std::max(ih_raw, 0.0);
  const double inter = iw * ih;
  const double uni = w * h + wg * hg - inter;

  const double diw_dx1 = (iw_raw > 0.0 && p.x1 >= g.x1) ? -1.0 : 0.0;
  const double diw_dx2 = (iw_raw > 0.0 && p.x2 <= g.x2) ? 1.0 : 0.0;
  const double dih_dy1 = (ih_raw > 0.0 && p.y1 >= g.y1) ? -1.0 : 0.0;
  const double dih_dy2 = (ih_raw > 0.0 && p.y2 <= g.y2) ? 1.0 : 0.0;

  const std::array<double, 4> dw{-1.0, 0.0, 1.0, 0.0};
  const std::array<double, 4> dh{0.0, -1.0, 0.0, 1.0};
  const std::array<double, 4> dinter{diw_dx1 * ih, dih_dy1 * iw, diw_dx2 * ih, dih_dy2 * iw};

  out.iou = inter / uni;
  for (int t = 0; t < 4; ++t) {
    const double darea = dw[t] * h + w * dh[t];
    const double duni = darea - dinter[t];
    out.diou[t] = (dinter[t] * uni - inter * duni) / (uni * uni);
  }

  // Enclosing box; pred-active one-sided derivative at corner ties.
  const double wc = std::max(p.x2, g.x2) - std::min(p.x1, g.x1);
  const double hc = std::max(p.y2, g.y2) - std::min(p.y1, g.y1);
  const std::array<double, 4> dwc{p.x1 <= g.x1 ? -1.0 : 0.0, 0.0, p.x2 >= g.x2 ? 1.0 : 0.0, 0.0};
  const std::array<double, 4> dhc{0.0, p.y1 <= g.y1 ? -1.0 : 0.0, 0.0, p.y2 >= g.y2 ? 1.0 : 0.0};

  // Center-distance term.
  const double ex = p.center_x() - g.center_x();
  const double ey = p.center_y() - g.center_y();
  const double rho2 = ex * ex + ey * ey;
  const double den = wc * wc + hc * hc + cfg.epsilon;
  const std::array<double, 4> dbx{0.5, 0.0, 0.5, 0.0};
  const std::array<double, 4> dby{0.0, 0.5, 0.0, 0.5};

  // Width/height difference terms, squared enclosing denominators.
  const double dnw = wc * wc + cfg.epsilon;
  const double dnh = hc * hc + cfg.epsilon;
  const double ew = w - wg;
  const double eh = h - hg;

  out.value = (1.0 - out.iou) + rho2 / den + ew * ew / dnw + eh * eh / dnh;

  if (p == g) {
    // Global minimum; every term vanishes and the zero subgradient is the
    // canonical choice (the one-sided IoU slopes are +-h/area and +-w/area).
    out.value = 0.0;
    out.grad = {0.0, 0.0, 0.0, 0.0};
    return out;
  }

  for (int t = 0; t < 4; ++t) {
    const double drho2 = 2.0 * ex * dbx[t] + 2.0 * ey * dby[t];
    const double dden = 2.0 * wc * dwc[t] + 2.0 * hc * dhc[t];
    const double ddis = (drho2 * den - rho2 * dden) / (den * den);
    const double ddnw = 2.0 * wc * dwc[t];
    const double ddnh = 2.0 * hc * dhc[t];
    const double dasp_w = (2.0 * ew * dw[t] * dnw - ew * ew * ddnw) / (dnw * dnw);
    const double dasp_h = (2.0 * eh * dh[t] * dnh - eh * eh * ddnh) / (dnh * dnh);
    out.grad[t] = -out.diou[t] + ddis + dasp_w + dasp_h;
  }
  return out;
}

}  // namespace

BBox BBox::from_corners(double x1, double y1, double x2, double y2) {
  BBox b{x1, y1, x2, y2};
  require_valid(b, "BBox::from_corners");
  return b;
}

BBox BBox::from_center(double cx, double cy, double w, double h) {
  BBox b{cx - w * 0.5, cy - h * 0.5, cx + w * 0.5, cy + h * 0.5};
  require_valid(b, "BBox::from_center");
  return b;
}

bool BBox::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         x2 > x1 && y2 > y1;
}

double iou(const BBox& a, const BBox& b) {
  require_valid(a, "iou");
  require_valid(b, "iou");
  const double iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

BBox enclosing_box(const BBox& a, const BBox& b) {
  require_valid(a, "enclosing_box");
  require_valid(b, "enclosing_box");
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

LossOutput eiou_loss(const BBox& pred, const BBox& gt, const LossConfig& cfg) {
  require_valid(pred, "eiou_loss");
  require_valid(gt, "eiou_loss");
  require_config(cfg);
  const EiouParts parts = eiou_parts(pred, gt, cfg);
  return {parts.value, parts.grad};
}

LossOutput focal_eiou_loss(const BBox& pred, const BBox& gt, const LossConfig& cfg) {
  require_valid(pred, "focal_eiou_loss");
  require_valid(gt, "focal_eiou_loss");
  require_config(cfg);
  const EiouParts parts = eiou_parts(pred, gt, cfg);
  if (cfg.gamma == 0.0) {
    return {parts.value, parts.grad};
  }

  const double scale = std::pow(parts.iou, cfg.gamma);
  LossOutput out;
  out.value = scale * parts.value;
  // d/dt [IoU^g * L] = g IoU^(g-1) dIoU L + IoU^g dL. Disjoint boxes sit on
  // the IoU = 0 plateau: both terms vanish there.
  const double dscale = parts.iou > 0.0 ? cfg.gamma * std::pow(parts.iou, cfg.gamma - 1.0) : 0.0;
  for (int t = 0; t < 4; ++t) {
    out.grad[t] = dscale * parts.diou[t] * parts.value + scale * parts.grad[t];
  }
  return out;
}

}  // namespace linekit
