#include <doctest.h>

#include <cmath>
#include <set>

#include "linekit/augment.hpp"
#include "linekit/rng.hpp"

using namespace linekit;

namespace {

Sample make_sample(int w, int h, std::uint64_t seed, std::vector<LabeledBox> labels = {}) {
  Sample s;
  s.image.width = w;
  s.image.height = h;
  s.image.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  SplitMix64 rng(seed);
  // Mid-range values so noise always changes a selected pixel.
  for (auto& v : s.image.pixels) v = static_cast<std::uint8_t>(1 + rng.uniform_int(254));
  s.labels = std::move(labels);
  return s;
}

bool labels_equal(const std::vector<LabeledBox>& a, const std::vector<LabeledBox>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].class_id != b[i].class_id || !(a[i].box == b[i].box)) return false;
  }
  return true;
}

bool boxes_inside(const Sample& s) {
  for (const LabeledBox& lb : s.labels) {
    if (!lb.box.valid()) return false;
    if (lb.box.x1 < -1e-9 || lb.box.y1 < -1e-9) return false;
    if (lb.box.x2 > s.image.width + 1e-9 || lb.box.y2 > s.image.height + 1e-9) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rotation by 0 is the identity") {
  const Sample s = make_sample(20, 12, 1, {{0, {2, 3, 10, 9}}});
  const Sample r = rotate_sample(s, 0.0);
  CHECK(r.image == s.image);
  CHECK(labels_equal(r.labels, s.labels));
  const Sample r360 = rotate_sample(s, 360.0);
  CHECK(r360.image == s.image);
}

TEST_CASE("quarter-turn corner mapping matches the hand example") {
  Sample s = make_sample(100, 50, 2, {{1, {10, 5, 30, 25}}});
  const Sample r = rotate_sample(s, 90.0);
  CHECK(r.image.width == 50);
  CHECK(r.image.height == 100);
  REQUIRE(r.labels.size() == 1);
  CHECK(r.labels[0].box == BBox{25, 10, 45, 30});
}

TEST_CASE("four quarter turns are the identity, pixels and labels") {
  const Sample s = make_sample(31, 17, 3, {{0, {1.5, 2.25, 20, 11}}, {4, {5, 5, 6, 6}}});
  Sample r = s;
  for (int i = 0; i < 4; ++i) r = rotate_sample(r, 90.0);
  CHECK(r.image == s.image);
  CHECK(labels_equal(r.labels, s.labels));

  // 90 + 270 and 180 + 180 also round-trip.
  CHECK(rotate_sample(rotate_sample(s, 90.0), 270.0).image == s.image);
  CHECK(rotate_sample(rotate_sample(s, 180.0), 180.0).image == s.image);
}

TEST_CASE("negative angles normalize onto the exact path") {
  const Sample s = make_sample(10, 8, 4, {{0, {1, 1, 5, 5}}});
  const Sample a = rotate_sample(s, -90.0);
  const Sample b = rotate_sample(s, 270.0);
  CHECK(a.image == b.image);
  CHECK(labels_equal(a.labels, b.labels));
}

TEST_CASE("arbitrary-angle rotation keeps labels valid and inside the canvas") {
  SplitMix64 rng(5);
  for (double angle : {30.0, 45.0, 123.4, 275.0}) {
    const Sample s = make_sample(40, 30, rng.next_u64(),
                                 {{0, {2, 2, 12, 10}}, {1, {20, 15, 38, 28}}});
    const Sample r = rotate_sample(s, angle);
    CHECK(r.image.width >= 30);
    CHECK(r.image.height >= 30);
    CHECK(boxes_inside(r));
    CHECK(r.labels.size() == s.labels.size());
  }
}

TEST_CASE("brightness scales with saturation") {
  const Sample s = make_sample(8, 8, 6);
  CHECK(adjust_brightness(s.image, 1.0) == s.image);

  const Raster dark = adjust_brightness(s.image, 0.0);
  for (auto v : dark.pixels) CHECK(v == 0);

  Raster two = s.image;
  two.pixels[0] = 100;
  two.pixels[1] = 200;
  const Raster bright = adjust_brightness(two, 1.5);
  CHECK(bright.pixels[0] == 150);
  CHECK(bright.pixels[1] == 255);
}

TEST_CASE("salt and pepper density endpoints") {
  const Sample s = make_sample(16, 16, 7);
  CHECK(salt_pepper(s.image, 0.0, 99) == s.image);

  const Raster all = salt_pepper(s.image, 1.0, 99);
  for (auto v : all.pixels) CHECK((v == 0 || v == 255));
}

TEST_CASE("salt and pepper hits a 6-sigma band and reruns identically") {
  const Sample s = make_sample(256, 256, 8);
  const double density = 0.05;
  const Raster noisy = salt_pepper(s.image, density, 1234);
  CHECK(salt_pepper(s.image, density, 1234) == noisy);
  CHECK(salt_pepper(s.image, density, 1235) != noisy);

  std::size_t changed = 0;
  const std::size_t n_pixels = 256 * 256;
  for (std::size_t p = 0; p < n_pixels; ++p) {
    if (noisy.pixels[p * 3] != s.image.pixels[p * 3] ||
        noisy.pixels[p * 3 + 1] != s.image.pixels[p * 3 + 1] ||
        noisy.pixels[p * 3 + 2] != s.image.pixels[p * 3 + 2]) {
      ++changed;
    }
  }
  const double fraction = static_cast<double>(changed) / static_cast<double>(n_pixels);
  const double sigma = std::sqrt(density * (1.0 - density) / static_cast<double>(n_pixels));
  CHECK(std::abs(fraction - density) <= 6.0 * sigma);
}

TEST_CASE("occlusion is disabled by a zero count") {
  OcclusionSpec spec;
  spec.count_min = 0;
  spec.count_max = 0;
  const Sample s = make_sample(32, 32, 9, {{0, {4, 4, 20, 20}}});
  const Sample r = occlude_sample(s, spec, 5);
  CHECK(r.image == s.image);
  CHECK(labels_equal(r.labels, s.labels));
}

TEST_CASE("occluders paint gray and never alter labels") {
  OcclusionSpec spec;
  const Sample s = make_sample(64, 64, 10, {{0, {2, 2, 12, 12}}});
  const Sample r = occlude_sample(s, spec, 11);
  CHECK(labels_equal(r.labels, s.labels));

  const auto rects = plan_occluders(64, 64, s.labels, spec, 11);
  CHECK(!rects.empty());
  for (const RectI& rect : rects) {
    for (int y = rect.y; y < rect.y + rect.h; ++y) {
      for (int x = rect.x; x < rect.x + rect.w; ++x) {
        CHECK(r.image.at(x, y, 0) == 128);
        CHECK(r.image.at(x, y, 1) == 128);
        CHECK(r.image.at(x, y, 2) == 128);
      }
    }
  }
}

TEST_CASE("accepted occluders respect the overlap cap across seeds") {
  OcclusionSpec spec;
  spec.frac_min = 0.02;
  spec.frac_max = 0.10;
  const std::vector<LabeledBox> labels{{0, {5, 5, 21, 21}}, {1, {30, 34, 60, 50}}};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const RectI& r : plan_occluders(64, 64, labels, spec, seed)) {
      for (const LabeledBox& lb : labels) {
        const double ix = std::max(0.0, std::min<double>(r.x + r.w, lb.box.x2) -
                                            std::max<double>(r.x, lb.box.x1));
        const double iy = std::max(0.0, std::min<double>(r.y + r.h, lb.box.y2) -
                                            std::max<double>(r.y, lb.box.y1));
        CHECK(ix * iy / lb.box.area() <= spec.max_overlap);
      }
    }
  }
}

TEST_CASE("pipeline emits originals plus one output per transform instance") {
  std::vector<NamedSample> inputs;
  for (int i = 0; i < 10; ++i) {
    inputs.push_back({"img" + std::to_string(i), make_sample(16, 12, 100 + i)});
  }

  AugmentSpec spec;  // one rotation + one brightness + noise = 3 instances
  spec.rotations = {90.0};
  spec.brightness_factors = {1.4};
  spec.sp_density = 0.02;
  spec.occlusion.count_max = 0;  // 3 instances total
  const auto out = run_pipeline(inputs, spec);
  CHECK(out.size() == 40);

  std::set<std::string> names;
  for (const NamedSample& ns : out) names.insert(ns.name);
  CHECK(names.size() == out.size());
  CHECK(names.count("img0"));
  CHECK(names.count("img0__rot90"));
  CHECK(names.count("img0__bright1p4"));
  CHECK(names.count("img0__sp"));
}

TEST_CASE("pipeline with no transforms is the identity") {
  AugmentSpec spec;
  spec.rotations.clear();
  spec.brightness_factors.clear();
  spec.sp_density = 0.0;
  spec.occlusion.count_max = 0;
  const std::vector<NamedSample> inputs{{"a", make_sample(8, 8, 1)}};
  const auto out = run_pipeline(inputs, spec);
  REQUIRE(out.size() == 1);
  CHECK(out[0].name == "a");
  CHECK(out[0].sample.image == inputs[0].sample.image);
}

TEST_CASE("pipeline reruns are byte-identical") {
  std::vector<NamedSample> inputs;
  for (int i = 0; i < 4; ++i) {
    inputs.push_back({"s" + std::to_string(i),
                      make_sample(24, 18, 50 + i, {{0, {2, 2, 9, 9}}})});
  }
  AugmentSpec spec;
  spec.seed = 42;
  const auto a = run_pipeline(inputs, spec);
  const auto b = run_pipeline(inputs, spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].sample.image == b[i].sample.image);
    CHECK(labels_equal(a[i].sample.labels, b[i].sample.labels));
  }
}

TEST_CASE("every emitted label stays valid and inside its canvas") {
  std::vector<NamedSample> inputs{
      {"x", make_sample(40, 26, 60, {{0, {1, 1, 12, 12}}, {2, {20, 10, 39, 25}}})}};
  AugmentSpec spec;
  spec.rotations = {90.0, 180.0, 270.0, 33.0};
  const auto out = run_pipeline(inputs, spec);
  for (const NamedSample& ns : out) CHECK(boxes_inside(ns.sample));
}
