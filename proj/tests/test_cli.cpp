#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "linekit/cli.hpp"
#include "linekit/dataset_io.hpp"

using namespace linekit;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("linekit_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// n images with one label each, cycling through the class ids.
void write_dataset(const fs::path& dir, int n) {
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "labels");
  Raster img = Raster::filled(16, 12, 40, 80, 120);
  for (int i = 0; i < n; ++i) {
    const std::string name = "img" + std::to_string(i);
    save_image_p6_file(img, dir / "images" / (name + ".ppm"));
    write_file(dir / "labels" / (name + ".txt"),
               std::to_string(i % 6) + " 0.5 0.5 0.25 0.25\n");
  }
  write_file(dir / "classes.txt", "trash\ntwig\nnest\nkite\nbird\nballoon\n");
}

// Predictions identical to the labels, full confidence.
void write_perfect_predictions(const fs::path& dir, int n) {
  for (int i = 0; i < n; ++i) {
    write_file(dir / ("img" + std::to_string(i) + ".txt"),
               std::to_string(i % 6) + " 0.5 0.5 0.25 0.25 0.99\n");
  }
}

}  // namespace

TEST_CASE("help exits 0 for every subcommand") {
  CHECK(run_cli({"--help"}) == 0);
  for (const char* sub : {"split", "augment", "eval", "loss-check", "module-check"}) {
    CHECK(run_cli({sub, "--help"}) == 0);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"frobnicate"}) == 2);
  CHECK(run_cli({"eval", "--bogus-flag"}) == 2);
  CHECK(run_cli({"eval", "--pred", "/nonexistent", "--gt", "/nonexistent", "--report",
                 "/tmp/never.json"}) == 2);
}

TEST_CASE("split writes deterministic train/val/test lists") {
  const fs::path dir = fresh_dir("split");
  write_dataset(dir, 10);

  CHECK(run_cli({"split", "--in", dir.string(), "--seed", "3"}) == 0);
  const std::string train = read_file(dir / "train.txt");
  const std::string val = read_file(dir / "val.txt");
  const std::string test = read_file(dir / "test.txt");
  auto count_lines = [](const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
  };
  CHECK(count_lines(train) == 6);
  CHECK(count_lines(val) == 2);
  CHECK(count_lines(test) == 2);

  const fs::path out2 = fresh_dir("split_again");
  CHECK(run_cli({"split", "--in", dir.string(), "--out", out2.string(), "--seed", "3"}) == 0);
  CHECK(read_file(out2 / "train.txt") == train);
  CHECK(read_file(out2 / "val.txt") == val);
  CHECK(read_file(out2 / "test.txt") == test);
}

TEST_CASE("augment expands the dataset deterministically") {
  const fs::path in = fresh_dir("aug_in");
  write_dataset(in, 3);
  const fs::path out_a = fresh_dir("aug_out_a");
  const fs::path out_b = fresh_dir("aug_out_b");

  const std::vector<std::string> args_a{"augment", "--in", in.string(), "--out", out_a.string(),
                                        "--seed", "9", "--rotations", "90,180",
                                        "--brightness", "0.6", "--sp-density", "0.02",
                                        "--occ-count-max", "2"};
  std::vector<std::string> args_b = args_a;
  args_b[4] = out_b.string();

  CHECK(run_cli(args_a) == 0);
  CHECK(run_cli(args_b) == 0);

  // 3 originals x (1 + 2 rotations + 1 brightness + noise + occlusion).
  int images = 0;
  for (const auto& e : fs::directory_iterator(out_a / "images")) {
    images += e.path().extension() == ".ppm" ? 1 : 0;
  }
  CHECK(images == 18);

  for (const auto& e : fs::directory_iterator(out_a / "images")) {
    const fs::path twin = out_b / "images" / e.path().filename();
    REQUIRE(fs::exists(twin));
    CHECK(read_file(e.path()) == read_file(twin));
  }
  for (const auto& e : fs::directory_iterator(out_a / "labels")) {
    CHECK(read_file(e.path()) == read_file(out_b / "labels" / e.path().filename()));
  }
}

TEST_CASE("eval writes a byte-stable report scoring perfect predictions at 1.0") {
  const fs::path gt = fresh_dir("eval_gt");
  write_dataset(gt, 6);
  const fs::path pred = fresh_dir("eval_pred");
  write_perfect_predictions(pred, 6);

  const fs::path report_a = gt / "report_a.json";
  const fs::path report_b = gt / "report_b.json";
  CHECK(run_cli({"eval", "--pred", pred.string(), "--gt", gt.string(), "--report",
                 report_a.string()}) == 0);
  CHECK(run_cli({"eval", "--pred", pred.string(), "--gt", gt.string(), "--report",
                 report_b.string()}) == 0);

  const std::string a = read_file(report_a);
  CHECK(a == read_file(report_b));

  const nlohmann::json doc = nlohmann::json::parse(a);
  CHECK(doc["map50"] == 1.0);
  CHECK(doc["map5095"] == 1.0);
  CHECK(doc["precision"] == 1.0);
  CHECK(doc["recall"] == 1.0);
  CHECK(doc["per_class"].size() == 6);
  CHECK(doc["config"]["conf"] == 0.25);
  CHECK(doc["config"]["nms_iou"] == 0.45);
}

TEST_CASE("eval rejects malformed prediction files") {
  const fs::path gt = fresh_dir("eval_bad_gt");
  write_dataset(gt, 1);
  const fs::path pred = fresh_dir("eval_bad_pred");
  write_file(pred / "img0.txt", "0 0.5 0.5 0.25 0.25 1.5\n");  // score out of range
  CHECK(run_cli({"eval", "--pred", pred.string(), "--gt", gt.string(), "--report",
                 (gt / "r.json").string()}) == 2);
}

TEST_CASE("loss-check passes at the documented tolerance") {
  CHECK(run_cli({"loss-check", "--pairs", "300", "--seed", "7", "--gamma", "0.5"}) == 0);
  CHECK(run_cli({"loss-check", "--pairs", "300", "--seed", "7", "--gamma", "0"}) == 0);
}

TEST_CASE("module-check verifies the frozen goldens") {
  CHECK(run_cli({"module-check", "--seed", "5"}) == 0);
  CHECK(run_cli({"module-check", "--seed", "123"}) == 0);
}

TEST_CASE("worker count never changes any output") {
  const fs::path gt = fresh_dir("threads_gt");
  write_dataset(gt, 6);
  const fs::path pred = fresh_dir("threads_pred");
  write_perfect_predictions(pred, 6);
  const fs::path aug_in = fresh_dir("threads_aug_in");
  write_dataset(aug_in, 2);

  std::string report_single, report_many, aug_single, aug_many;
  for (const char* threads : {"1", "7"}) {
    setenv("LINEKIT_THREADS", threads, 1);
    const fs::path report = gt / ("report_" + std::string(threads) + ".json");
    REQUIRE(run_cli({"eval", "--pred", pred.string(), "--gt", gt.string(), "--report",
                     report.string()}) == 0);
    const fs::path aug_out = fresh_dir("threads_aug_out_" + std::string(threads));
    REQUIRE(run_cli({"augment", "--in", aug_in.string(), "--out", aug_out.string(), "--seed",
                     "4"}) == 0);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(aug_out / "images")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string aug_bytes;
    for (const fs::path& f : files) aug_bytes += f.filename().string() + read_file(f);
    (std::string(threads) == "1" ? report_single : report_many) = read_file(report);
    (std::string(threads) == "1" ? aug_single : aug_many) = aug_bytes;
  }
  unsetenv("LINEKIT_THREADS");
  CHECK(report_single == report_many);
  CHECK(aug_single == aug_many);
}
