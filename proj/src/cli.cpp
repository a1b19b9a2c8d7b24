#include "linekit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "linekit/augment.hpp"
#include "linekit/dataset_io.hpp"
#include "linekit/evaluation.hpp"
#include "linekit/selfcheck.hpp"

namespace fs = std::filesystem;

namespace linekit {

namespace {

constexpr double kGradientTolerance = 1e-5;

[[noreturn]] void io_fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<std::string> sorted_stems(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) io_fail("not a directory: " + dir.string());
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      stems.push_back(entry.path().stem().string());
    }
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) io_fail("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) io_fail("cannot write file: " + path.string());
  out << text;
  if (!out) io_fail("short write on file: " + path.string());
}

std::vector<std::string> resolve_class_names(const std::string& classes_flag, const fs::path& data_dir) {
  if (!classes_flag.empty()) return load_class_names(classes_flag);
  const fs::path local = data_dir / "classes.txt";
  if (fs::exists(local)) return load_class_names(local);
  return default_class_names();
}

// Dataset layout: images/*.ppm beside labels/*.txt, basename-matched.
std::vector<NamedSample> load_dataset_dir(const fs::path& dir, int n_classes) {
  const fs::path images = dir / "images";
  const fs::path labels = dir / "labels";
  std::vector<NamedSample> out;
  for (const std::string& stem : sorted_stems(images, ".ppm")) {
    NamedSample ns;
    ns.name = stem;
    ns.sample.image = load_image_p6_file(images / (stem + ".ppm"));
    const fs::path label_file = labels / (stem + ".txt");
    if (fs::exists(label_file)) {
      try {
        ns.sample.labels = parse_yolo_labels(read_text_file(label_file), ns.sample.image.width,
                                             ns.sample.image.height, n_classes);
      } catch (const std::exception& e) {
        io_fail(label_file.string() + ": " + e.what());
      }
    }
    out.push_back(std::move(ns));
  }
  return out;
}

void write_dataset_dir(const fs::path& dir, const std::vector<NamedSample>& samples,
                       const std::vector<std::string>& class_names) {
  std::error_code ec;
  fs::create_directories(dir / "images", ec);
  fs::create_directories(dir / "labels", ec);
  if (!fs::is_directory(dir / "images") || !fs::is_directory(dir / "labels")) {
    io_fail("cannot create output dataset layout under " + dir.string());
  }
  for (const NamedSample& ns : samples) {
    save_image_p6_file(ns.sample.image, dir / "images" / (ns.name + ".ppm"));
    write_text_file(dir / "labels" / (ns.name + ".txt"),
                    serialize_yolo_labels(ns.sample.labels, ns.sample.image.width,
                                          ns.sample.image.height));
  }
  std::string classes;
  for (const std::string& name : class_names) classes += name + "\n";
  write_text_file(dir / "classes.txt", classes);
}

// Prediction lines are "class cx cy w h score", normalized like labels.
std::vector<Detection> parse_predictions(const std::string& text, const std::string& image_id,
                                         int n_classes) {
  std::vector<Detection> out;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    long cls = 0;
    double cx = 0, cy = 0, w = 0, h = 0, score = 0;
    if (!(fields >> cls)) {
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        io_fail("prediction parse error at line " + std::to_string(line_no) +
                ": expected 'class cx cy w h score'");
      }
      continue;
    }
    if (!(fields >> cx >> cy >> w >> h >> score)) {
      io_fail("prediction parse error at line " + std::to_string(line_no) +
              ": expected 'class cx cy w h score'");
    }
    if (cls < 0 || cls >= n_classes) {
      io_fail("prediction parse error at line " + std::to_string(line_no) + ": unknown class id");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      io_fail("prediction parse error at line " + std::to_string(line_no) +
              ": score out of [0, 1]");
    }
    Detection d;
    d.image_id = image_id;
    d.class_id = static_cast<int>(cls);
    d.score = score;
    d.box = BBox{cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
    if (!d.box.valid()) {
      io_fail("prediction parse error at line " + std::to_string(line_no) + ": degenerate box");
    }
    out.push_back(std::move(d));
  }
  return out;
}

int cmd_split(const std::string& in_dir, std::string out_dir, std::uint64_t seed,
              std::vector<double> ratios) {
  if (out_dir.empty()) out_dir = in_dir;
  if (ratios.size() != 3) io_fail("--ratios needs exactly three values");
  const std::vector<std::string> ids = sorted_stems(fs::path(in_dir) / "images", ".ppm");
  const auto splits = split_dataset(ids, {ratios[0], ratios[1], ratios[2]}, seed);

  const char* names[3] = {"train.txt", "val.txt", "test.txt"};
  for (int s = 0; s < 3; ++s) {
    std::string text;
    for (const std::string& id : splits[s]) text += id + "\n";
    write_text_file(fs::path(out_dir) / names[s], text);
  }
  std::cout << "split " << ids.size() << " ids into " << splits[0].size() << "/"
            << splits[1].size() << "/" << splits[2].size() << "\n";
  return 0;
}

int cmd_augment(const std::string& in_dir, const std::string& out_dir, const AugmentSpec& spec,
                const std::string& classes_flag) {
  const std::vector<std::string> class_names = resolve_class_names(classes_flag, in_dir);
  const std::vector<NamedSample> inputs =
      load_dataset_dir(in_dir, static_cast<int>(class_names.size()));
  const std::vector<NamedSample> outputs = run_pipeline(inputs, spec);
  write_dataset_dir(out_dir, outputs, class_names);
  std::cout << "augmented " << inputs.size() << " samples into " << outputs.size() << "\n";
  return 0;
}

int cmd_eval(const std::string& pred_dir, const std::string& gt_dir, double conf, double nms_iou,
             const std::string& report_path, const std::string& classes_flag) {
  const std::vector<std::string> class_names = resolve_class_names(classes_flag, gt_dir);
  const int n_classes = static_cast<int>(class_names.size());

  fs::path gt_labels = fs::path(gt_dir) / "labels";
  if (!fs::is_directory(gt_labels)) gt_labels = gt_dir;

  std::vector<GroundTruth> gts;
  std::vector<std::string> gt_ids;
  for (const std::string& stem : sorted_stems(gt_labels, ".txt")) {
    if (stem == "classes" || stem == "train" || stem == "val" || stem == "test") continue;
    gt_ids.push_back(stem);
    std::vector<LabeledBox> boxes;
    try {
      // Evaluation runs in normalized coordinates; IoU is scale invariant.
      boxes = parse_yolo_labels(read_text_file(gt_labels / (stem + ".txt")), 1.0, 1.0, n_classes);
    } catch (const std::exception& e) {
      io_fail((gt_labels / (stem + ".txt")).string() + ": " + e.what());
    }
    for (const LabeledBox& lb : boxes) gts.push_back({stem, lb.class_id, lb.box});
  }

  std::vector<Detection> dets;
  for (const std::string& stem : sorted_stems(pred_dir, ".txt")) {
    if (stem == "classes") continue;
    std::vector<Detection> file_dets;
    try {
      file_dets = parse_predictions(read_text_file(fs::path(pred_dir) / (stem + ".txt")), stem,
                                    n_classes);
    } catch (const std::exception& e) {
      io_fail((fs::path(pred_dir) / (stem + ".txt")).string() + ": " + e.what());
    }
    dets.insert(dets.end(), file_dets.begin(), file_dets.end());
  }

  EvalConfig config;
  config.conf_threshold = conf;
  config.nms_iou = nms_iou;
  config.class_names = class_names;

  const std::vector<Detection> survivors = nms(dets, nms_iou);
  const EvalReport report = evaluate(survivors, gts, config);
  write_text_file(report_path, report_to_json(report));

  std::cout << "evaluated " << gt_ids.size() << " ground-truth files, " << survivors.size()
            << " detections after nms; report written to " << report_path << "\n";
  return 0;
}

int cmd_loss_check(int pairs, std::uint64_t seed, double gamma) {
  const GradientCheckResult res = gradient_check(pairs, seed, gamma);
  std::cout << "max relative gradient error: " << res.max_rel_err << " (pairs checked "
            << res.checked << ", excluded near ties " << res.skipped << ", gamma " << gamma
            << ")\n";
  return res.max_rel_err <= kGradientTolerance ? 0 : 1;
}

int cmd_module_check(std::uint64_t seed) {
  bool all_pass = true;
  for (const CheckLine& line : module_checks(seed)) {
    std::cout << (line.pass ? "[ok]   " : "[FAIL] ") << line.name;
    if (!line.pass && !line.detail.empty()) std::cout << " (" << line.detail << ")";
    std::cout << "\n";
    all_pass = all_pass && line.pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"detection-support toolkit: box-loss gradients, attention/pyramid kernels, "
               "dataset augmentation, and mAP evaluation"};
  app.require_subcommand(1);

  // split
  auto* split = app.add_subcommand("split", "shuffle dataset ids and write train/val/test lists");
  std::string split_in, split_out;
  std::uint64_t split_seed = 0;
  std::vector<double> ratios{0.6, 0.2, 0.2};
  split->add_option("--in", split_in, "dataset directory (expects images/*.ppm)")->required();
  split->add_option("--out", split_out, "output directory for the id lists (default: --in)");
  split->add_option("--seed", split_seed, "shuffle seed");
  split->add_option("--ratios", ratios, "train,val,test ratios summing to 1")->delimiter(',');

  // augment
  auto* augment = app.add_subcommand("augment", "expand a dataset with label-aware transforms");
  std::string aug_in, aug_out, aug_classes;
  AugmentSpec spec;
  bool no_rotations = false, no_brightness = false;
  augment->add_option("--in", aug_in, "input dataset directory")->required();
  augment->add_option("--out", aug_out, "output dataset directory")->required();
  augment->add_option("--seed", spec.seed, "base seed for the seeded transforms");
  augment->add_option("--rotations", spec.rotations, "clockwise angles in degrees")->delimiter(',');
  augment->add_flag("--no-rotations", no_rotations, "disable rotation variants");
  augment->add_option("--brightness", spec.brightness_factors, "brightness factors")->delimiter(',');
  augment->add_flag("--no-brightness", no_brightness, "disable brightness variants");
  augment->add_option("--sp-density", spec.sp_density, "salt-and-pepper pixel density (0 disables)");
  augment->add_option("--occ-count-min", spec.occlusion.count_min, "minimum occluders per image");
  augment->add_option("--occ-count-max", spec.occlusion.count_max,
                      "maximum occluders per image (0 disables)");
  augment->add_option("--occ-frac-min", spec.occlusion.frac_min, "min occluder area fraction");
  augment->add_option("--occ-frac-max", spec.occlusion.frac_max, "max occluder area fraction");
  augment->add_option("--occ-max-overlap", spec.occlusion.max_overlap,
                      "max fraction of a label box an occluder may cover");
  augment->add_option("--classes", aug_classes, "class-name file (default: <in>/classes.txt)");

  // eval
  auto* eval = app.add_subcommand("eval", "score predictions against ground truth (NMS + mAP)");
  std::string pred_dir, gt_dir, report_path, eval_classes;
  double conf = 0.25, nms_iou = 0.45;
  eval->add_option("--pred", pred_dir, "directory of per-image 'class cx cy w h score' files")
      ->required();
  eval->add_option("--gt", gt_dir, "ground-truth directory (labels/*.txt or flat *.txt)")
      ->required();
  eval->add_option("--conf", conf, "confidence threshold for precision/recall counts");
  eval->add_option("--nms-iou", nms_iou, "IoU threshold for class-wise NMS");
  eval->add_option("--report", report_path, "output JSON report path")->required();
  eval->add_option("--classes", eval_classes, "class-name file (default: <gt>/classes.txt)");

  // loss-check
  auto* loss_check = app.add_subcommand("loss-check",
                                        "finite-difference audit of the box-loss gradients");
  int pairs = 1000;
  std::uint64_t loss_seed = 7;
  double gamma = 0.5;
  loss_check->add_option("--pairs", pairs, "number of random box pairs")->check(CLI::PositiveNumber);
  loss_check->add_option("--seed", loss_seed, "generator seed");
  loss_check->add_option("--gamma", gamma, "focal exponent")->check(CLI::NonNegativeNumber);

  // module-check
  auto* module_check =
      app.add_subcommand("module-check", "golden-checksum and invariant checks for the kernels");
  std::uint64_t module_seed = 0;
  module_check->add_option("--seed", module_seed, "seed for the invariant checks");

  std::vector<const char*> argv;
  argv.push_back("linekit");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (split->parsed()) return cmd_split(split_in, split_out, split_seed, ratios);
    if (augment->parsed()) {
      if (no_rotations) spec.rotations.clear();
      if (no_brightness) spec.brightness_factors.clear();
      return cmd_augment(aug_in, aug_out, spec, aug_classes);
    }
    if (eval->parsed()) return cmd_eval(pred_dir, gt_dir, conf, nms_iou, report_path, eval_classes);
    if (loss_check->parsed()) return cmd_loss_check(pairs, loss_seed, gamma);
    if (module_check->parsed()) return cmd_module_check(module_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace linekit
