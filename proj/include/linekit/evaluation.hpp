#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "linekit/box_geometry.hpp"

namespace linekit {

struct Detection {
  std::string image_id;
  int class_id = 0;
  double score = 0.0;  // in [0, 1]
  BBox box;
};

struct GroundTruth {
  std::string image_id;
  int class_id = 0;
  BBox box;
};

// Greedy class-wise NMS per image: walk detections in descending score (ties
// keep input order); a detection survives unless some already-kept detection
// of the same image and class overlaps it with IoU strictly above the
// threshold. Survivors are returned in input order.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh);

struct MatchResult {
  std::vector<std::size_t> order;  // detection indices, descending score (stable)
  std::vector<char> is_tp;         // parallel to order
  std::size_t fn = 0;              // ground truths left unmatched
};

// Greedy one-to-one matching per image and class. Detections are visited in
// descending score; each takes the unmatched ground truth with highest IoU
// when that IoU >= iou_thresh (inclusive), else counts as a false positive.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<GroundTruth>& gts, double iou_thresh);

// Area under the precision envelope over recall (all-point interpolation).
// tp_flags must be ordered by descending score. n_gt = 0 yields 0.
double average_precision(const std::vector<char>& tp_flags, std::size_t n_gt);

struct EvalConfig {
  double conf_threshold = 0.25;  // operating point for precision/recall/counts
  double nms_iou = 0.45;         // echoed into the report; NMS runs upstream
  std::vector<std::string> class_names;
};

struct ClassReport {
  int class_id = 0;
  std::string name;
  std::size_t n_gt = 0;
  std::array<double, 10> ap{};  // per IoU threshold 0.50 .. 0.95
  double ap50 = 0.0;
  double ap5095 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0;  // at conf_threshold, IoU 0.5
  bool counted = false;                // true when n_gt > 0 (enters the mAP means)
};

struct EvalReport {
  std::vector<ClassReport> per_class;
  double map50 = 0.0;     // NaN when no class has ground truth
  double map5095 = 0.0;   // NaN when no class has ground truth
  double precision = 0.0; // NaN when no detection clears the threshold
  double recall = 0.0;    // NaN when there is no ground truth
  std::size_t tp = 0, fp = 0, fn = 0;
  EvalConfig config;
};

// The ten IoU thresholds 0.50, 0.55, ..., 0.95, generated as (50 + 5i)/100
// so a computed IoU of exactly 0.60 compares equal to the 0.60 threshold.
std::vector<double> iou_threshold_grid();

// Per-class AP across the threshold grid plus operating-point counts.
// mAP means run over classes that have at least one ground truth; a class
// with neither ground truths nor detections has AP 0 and stays out of the
// means. Aggregation order is fixed, so reports are byte-stable.
EvalReport evaluate(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                    const EvalConfig& config);

// Canonical JSON: keys sorted, floats rounded to 6 significant digits,
// undefined metrics serialized as null.
std::string report_to_json(const EvalReport& report);

}  // namespace linekit
