#include "linekit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "linekit/parallel.hpp"

namespace linekit {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

std::vector<std::size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

void validate_detection(const Detection& d) {
  if (!(d.score >= 0.0 && d.score <= 1.0)) {
    throw std::invalid_argument("detection: score must lie in [0, 1]");
  }
  if (!d.box.valid()) throw std::invalid_argument("detection: invalid box");
}

// Round to 6 significant digits so the JSON encoder prints a short, stable
// literal for every metric.
double round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

nlohmann::json metric_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return round6(v);
}

}  // namespace

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh) {
  if (!(iou_thresh >= 0.0 && iou_thresh <= 1.0)) {
    throw std::invalid_argument("nms: threshold must lie in [0, 1]");
  }
  for (const Detection& d : dets) validate_detection(d);

  const std::vector<std::size_t> order = score_order(dets);
  std::vector<char> kept(dets.size(), 0);
  // Kept detections per (image, class), in the order they were kept.
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i : order) {
    auto& winners = groups[{dets[i].image_id, dets[i].class_id}];
    bool suppressed = false;
    for (std::size_t k : winners) {
      if (iou(dets[k].box, dets[i].box) > iou_thresh) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept[i] = 1;
      winners.push_back(i);
    }
  }

  std::vector<Detection> out;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (kept[i]) out.push_back(dets[i]);
  }
  return out;
}

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts, double iou_thresh) {
  for (const Detection& d : dets) validate_detection(d);

  // Ground-truth indices per (image, class).
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> gt_groups;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (!gts[g].box.valid()) throw std::invalid_argument("ground truth: invalid box");
    gt_groups[{gts[g].image_id, gts[g].class_id}].push_back(g);
  }
  std::vector<char> gt_matched(gts.size(), 0);

  MatchResult res;
  res.order = score_order(dets);
  res.is_tp.assign(dets.size(), 0);
  for (std::size_t pos = 0; pos < res.order.size(); ++pos) {
    const Detection& d = dets[res.order[pos]];
    auto it = gt_groups.find({d.image_id, d.class_id});
    if (it == gt_groups.end()) continue;

    double best_iou = -1.0;
    std::size_t best_g = 0;
    bool found = false;
    for (std::size_t g : it->second) {
      if (gt_matched[g]) continue;
      const double v = iou(d.box, gts[g].box);
      if (v > best_iou) {
        best_iou = v;
        best_g = g;
        found = true;
      }
    }
    if (found && best_iou >= iou_thresh) {
      gt_matched[best_g] = 1;
      res.is_tp[pos] = 1;
    }
  }
  res.fn = static_cast<std::size_t>(std::count(gt_matched.begin(), gt_matched.end(), 0));
  return res;
}

double average_precision(const std::vector<char>& tp_flags, std::size_t n_gt) {
  if (n_gt == 0 || tp_flags.empty()) return 0.0;

  const std::size_t n = tp_flags.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += tp_flags[i] ? 1 : 0;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }

  // Precision envelope from the right, then integrate over recall steps.
  for (std::size_t i = n - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

std::vector<double> iou_threshold_grid() {
  std::vector<double> grid;
  grid.reserve(10);
  for (int i = 0; i < 10; ++i) grid.push_back(static_cast<double>(50 + 5 * i) / 100.0);
  return grid;
}

EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    const EvalConfig& config) {
  const int n_classes = static_cast<int>(config.class_names.size());
  if (n_classes <= 0) throw std::invalid_argument("evaluate: class_names must not be empty");
  for (const Detection& d : dets) {
    validate_detection(d);
    if (d.class_id < 0 || d.class_id >= n_classes) {
      throw std::invalid_argument("evaluate: detection class id out of range");
    }
  }
  for (const GroundTruth& g : gts) {
    if (g.class_id < 0 || g.class_id >= n_classes) {
      throw std::invalid_argument("evaluate: ground-truth class id out of range");
    }
  }

  const std::vector<double> grid = iou_threshold_grid();

  EvalReport report;
  report.config = config;
  report.per_class.resize(n_classes);

  // Classes are independent; results land in per-class slots, so the
  // parallel schedule cannot change the report.
  parallel_for(static_cast<std::size_t>(n_classes), [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    std::vector<Detection> cdets;
    std::vector<GroundTruth> cgts;
    for (const Detection& d : dets) {
      if (d.class_id == c) cdets.push_back(d);
    }
    for (const GroundTruth& g : gts) {
      if (g.class_id == c) cgts.push_back(g);
    }

    ClassReport& cr = report.per_class[ci];
    cr.class_id = c;
    cr.name = config.class_names[ci];
    cr.n_gt = cgts.size();
    cr.counted = !cgts.empty();

    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      const MatchResult m = match_detections(cdets, cgts, grid[ti]);
      cr.ap[ti] = average_precision(m.is_tp, cr.n_gt);
    }
    cr.ap50 = cr.ap[0];
    cr.ap5095 = std::accumulate(cr.ap.begin(), cr.ap.end(), 0.0) / static_cast<double>(cr.ap.size());

    // Operating point: confident detections only, IoU 0.5 matching.
    std::vector<Detection> confident;
    for (const Detection& d : cdets) {
      if (d.score >= config.conf_threshold) confident.push_back(d);
    }
    const MatchResult op = match_detections(confident, cgts, 0.5);
    cr.tp = static_cast<std::size_t>(std::count(op.is_tp.begin(), op.is_tp.end(), 1));
    cr.fp = confident.size() - cr.tp;
    cr.fn = op.fn;
  });

  std::size_t counted = 0;
  double sum50 = 0.0;
  std::array<double, 10> threshold_sums{};
  for (const ClassReport& cr : report.per_class) {
    report.tp += cr.tp;
    report.fp += cr.fp;
    report.fn += cr.fn;
    if (!cr.counted) continue;
    ++counted;
    sum50 += cr.ap50;
    for (std::size_t ti = 0; ti < grid.size(); ++ti) threshold_sums[ti] += cr.ap[ti];
  }

  if (counted == 0) {
    report.map50 = kUndefined;
    report.map5095 = kUndefined;
  } else {
    report.map50 = sum50 / static_cast<double>(counted);
    double acc = 0.0;
    for (double s : threshold_sums) acc += s / static_cast<double>(counted);
    report.map5095 = acc / static_cast<double>(grid.size());
  }
  report.precision = (report.tp + report.fp) == 0
                         ? kUndefined
                         : static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fp);
  report.recall = (report.tp + report.fn) == 0
                      ? kUndefined
                      : static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["config"] = {
      {"conf", round6(report.config.conf_threshold)},
      {"nms_iou", round6(report.config.nms_iou)},
  };
  doc["map50"] = metric_or_null(report.map50);
  doc["map5095"] = metric_or_null(report.map5095);
  doc["precision"] = metric_or_null(report.precision);
  doc["recall"] = metric_or_null(report.recall);

  nlohmann::json classes = nlohmann::json::array();
  for (const ClassReport& cr : report.per_class) {
    classes.push_back({
        {"name", cr.name},
        {"ap50", round6(cr.ap50)},
        {"ap5095", round6(cr.ap5095)},
        {"tp", cr.tp},
        {"fp", cr.fp},
        {"fn", cr.fn},
    });
  }
  doc["per_class"] = std::move(classes);
  return doc.dump(2) + "\n";
}

}  // namespace linekit
