#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linekit/dataset_io.hpp"

namespace linekit {

// One image plus its pixel-space labels.
struct Sample {
  Raster image;
  std::vector<LabeledBox> labels;
};

struct OcclusionSpec {
  int count_min = 1;
  int count_max = 3;
  double frac_min = 0.01;     // patch area as a fraction of image area
  double frac_max = 0.05;
  double max_overlap = 0.5;   // max fraction of any label box a patch may cover
};

struct AugmentSpec {
  std::vector<double> rotations{90.0, 180.0, 270.0};     // degrees, clockwise
  std::vector<double> brightness_factors{0.6, 1.4};
  double sp_density = 0.02;                              // 0 disables
  OcclusionSpec occlusion;                               // count_max 0 disables
  std::uint64_t seed = 0;
};

// Clockwise rotation about the image center. Multiples of 90 degrees use the
// exact lossless pixel remap (90 cw maps pixel (x, y) of a WxH image to
// (H-1-y, x); box corner (x, y) to (H-y, x)); four of them round-trip bit
// exactly. Other angles expand the canvas to the rotated bounding rectangle,
// resample nearest-neighbor, and replace each box by the axis-aligned hull of
// its rotated corners, clipped to the canvas and dropped under 1 px^2.
Sample rotate_sample(const Sample& s, double angle_deg);

// v -> round(v * factor), saturating to [0, 255]. Labels are untouched.
Raster adjust_brightness(const Raster& img, double factor);

// Each pixel is hit independently with the given probability; hit pixels go
// to black or white (all channels) with equal odds. Byte-identical per seed.
Raster salt_pepper(const Raster& img, double density, std::uint64_t seed);

struct RectI {
  int x = 0, y = 0, w = 0, h = 0;
};

// Seeded occluder placement. A candidate rectangle covering more than
// max_overlap of any label box is resampled, up to 100 tries, then skipped.
std::vector<RectI> plan_occluders(int width, int height, const std::vector<LabeledBox>& labels,
                                  const OcclusionSpec& spec, std::uint64_t seed);

// Paints the planned occluders mid-gray (128). Labels are untouched.
Sample occlude_sample(const Sample& s, const OcclusionSpec& spec, std::uint64_t seed);

struct NamedSample {
  std::string name;
  Sample sample;
};

// Emits each input unchanged plus one variant per configured transform
// instance (every rotation angle, every brightness factor, one salt-and-
// pepper pass when density > 0, one occlusion pass when count_max > 0).
// Variant names append a transform tag to the input name. Seeded transforms
// draw from derive_seed(spec.seed, sample index, transform index), so outputs
// do not depend on processing order.
std::vector<NamedSample> run_pipeline(const std::vector<NamedSample>& samples,
                                      const AugmentSpec& spec);

}  // namespace linekit
