#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>

#include "linekit/dataset_io.hpp"
#include "linekit/rng.hpp"

using namespace linekit;

TEST_CASE("yolo labels parse into pixel corner boxes") {
  const auto labels = parse_yolo_labels("2 0.5 0.5 0.2 0.1\n", 640, 640);
  REQUIRE(labels.size() == 1);
  CHECK(labels[0].class_id == 2);
  CHECK(labels[0].box == BBox{256, 288, 384, 352});

  CHECK(parse_yolo_labels("", 640, 640).empty());
  CHECK(parse_yolo_labels("\n   \n\n", 640, 640).empty());
}

TEST_CASE("yolo label validation names the offending line") {
  CHECK_THROWS_WITH_AS(parse_yolo_labels("1 0.5 0.5 1.5 0.1\n", 640, 640),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_yolo_labels("0 0.5 0.5 0.2 0.2\n9 0.5 0.5 0.2 0.2\n", 640, 640),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_AS(parse_yolo_labels("0 0.05 0.5 0.2 0.2\n", 640, 640), std::runtime_error);
  CHECK_THROWS_AS(parse_yolo_labels("not a label\n", 640, 640), std::runtime_error);
  CHECK_THROWS_AS(parse_yolo_labels("0 0.5 0.5 0.2\n", 640, 640), std::runtime_error);
}

TEST_CASE("yolo labels serialize with six decimals and round-trip") {
  const std::vector<LabeledBox> labels{{2, {256, 288, 384, 352}}};
  CHECK(serialize_yolo_labels(labels, 640, 640) == "2 0.500000 0.500000 0.200000 0.100000\n");
  CHECK(serialize_yolo_labels({}, 640, 640).empty());
  CHECK(serialize_yolo_labels({{3, {0, 0, 640, 640}}}, 640, 640) ==
        "3 0.500000 0.500000 1.000000 1.000000\n");
  CHECK_THROWS_AS(serialize_yolo_labels({{0, {-5, 0, 100, 100}}}, 640, 640), std::invalid_argument);
}

TEST_CASE("yolo round trip stays within 1e-6 normalized") {
  SplitMix64 rng(55);
  for (int i = 0; i < 1000; ++i) {
    const double w = rng.uniform(0.01, 0.9);
    const double h = rng.uniform(0.01, 0.9);
    const double cx = rng.uniform(w / 2, 1.0 - w / 2);
    const double cy = rng.uniform(h / 2, 1.0 - h / 2);
    char line[160];
    std::snprintf(line, sizeof(line), "%d %.8f %.8f %.8f %.8f\n",
                  static_cast<int>(rng.uniform_int(6)), cx, cy, w, h);

    const auto parsed = parse_yolo_labels(line, 640, 480);
    REQUIRE(parsed.size() == 1);
    const std::string text = serialize_yolo_labels(parsed, 640, 480);
    const auto reparsed = parse_yolo_labels(text, 640, 480);
    REQUIRE(reparsed.size() == 1);
    CHECK(std::abs(reparsed[0].box.center_x() / 640 - cx) <= 1e-6);
    CHECK(std::abs(reparsed[0].box.center_y() / 480 - cy) <= 1e-6);
    CHECK(std::abs(reparsed[0].box.width() / 640 - w) <= 1e-6);
    CHECK(std::abs(reparsed[0].box.height() / 480 - h) <= 1e-6);
  }
}

TEST_CASE("p6 codec reads headers, comments, and payload") {
  const std::string red = "P6\n1 1\n255\n";
  std::vector<std::uint8_t> bytes(red.begin(), red.end());
  bytes.insert(bytes.end(), {255, 0, 0});
  const Raster r = load_image_p6(bytes);
  CHECK(r.width == 1);
  CHECK(r.height == 1);
  CHECK(r.pixels == std::vector<std::uint8_t>{255, 0, 0});

  const std::string commented = "P6 # magic\n# a whole comment line\n2 # width\n1\n# maxval next\n255\n";
  std::vector<std::uint8_t> cb(commented.begin(), commented.end());
  cb.insert(cb.end(), {1, 2, 3, 4, 5, 6});
  const Raster rc = load_image_p6(cb);
  CHECK(rc.width == 2);
  CHECK(rc.height == 1);
  CHECK(rc.pixels == std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("p6 round trip is byte-exact") {
  SplitMix64 rng(66);
  Raster r;
  r.width = 13;
  r.height = 7;
  r.pixels.resize(13 * 7 * 3);
  for (auto& v : r.pixels) v = static_cast<std::uint8_t>(rng.uniform_int(256));

  const std::vector<std::uint8_t> bytes = save_image_p6(r);
  const Raster back = load_image_p6(bytes);
  CHECK(back == r);
  CHECK(save_image_p6(back) == bytes);
}

TEST_CASE("p6 codec rejects malformed input") {
  const std::string p5 = "P5\n1 1\n255\n";
  CHECK_THROWS_AS(load_image_p6(std::vector<std::uint8_t>(p5.begin(), p5.end())),
                  std::runtime_error);

  const std::string maxval = "P6\n1 1\n65535\n";
  std::vector<std::uint8_t> mb(maxval.begin(), maxval.end());
  mb.insert(mb.end(), {0, 0, 0});
  CHECK_THROWS_AS(load_image_p6(mb), std::runtime_error);

  const std::string truncated = "P6\n2 2\n255\n";
  std::vector<std::uint8_t> tb(truncated.begin(), truncated.end());
  tb.insert(tb.end(), {1, 2, 3});
  CHECK_THROWS_AS(load_image_p6(tb), std::runtime_error);
}

TEST_CASE("split honors the 6:2:2 example and is deterministic") {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("s" + std::to_string(i));

  const auto splits = split_dataset(ids, {0.6, 0.2, 0.2}, 7);
  CHECK(splits[0].size() == 6);
  CHECK(splits[1].size() == 2);
  CHECK(splits[2].size() == 2);

  const auto again = split_dataset(ids, {0.6, 0.2, 0.2}, 7);
  CHECK(splits == again);
  const auto other = split_dataset(ids, {0.6, 0.2, 0.2}, 8);
  CHECK(splits != other);

  const auto empty = split_dataset({}, {0.6, 0.2, 0.2}, 1);
  CHECK(empty[0].empty());
  CHECK(empty[1].empty());
  CHECK(empty[2].empty());

  CHECK_THROWS_AS(split_dataset(ids, {0.5, 0.2, 0.2}, 1), std::invalid_argument);
}

TEST_CASE("split is always a partition with near-proportional sizes") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(200));
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));

    const auto splits = split_dataset(ids, {0.6, 0.2, 0.2}, rng.next_u64());
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& part : splits) {
      total += part.size();
      seen.insert(part.begin(), part.end());
    }
    CHECK(total == ids.size());
    CHECK(seen.size() == ids.size());
    CHECK(std::abs(static_cast<double>(splits[0].size()) - 0.6 * n) <= 1.0);
    CHECK(std::abs(static_cast<double>(splits[1].size()) - 0.2 * n) <= 1.0);
    CHECK(std::abs(static_cast<double>(splits[2].size()) - 0.2 * n) <= 1.0);
  }
}

TEST_CASE("default vocabulary lists the six classes in id order") {
  const auto& names = default_class_names();
  REQUIRE(names.size() == 6);
  CHECK(names[0] == "trash");
  CHECK(names[1] == "twig");
  CHECK(names[2] == "nest");
  CHECK(names[3] == "kite");
  CHECK(names[4] == "bird");
  CHECK(names[5] == "balloon");
}
