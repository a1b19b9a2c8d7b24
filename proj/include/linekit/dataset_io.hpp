#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "linekit/box_geometry.hpp"

namespace linekit {

// 8-bit RGB raster, row-major, interleaved channels.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // width * height * 3 bytes

  static Raster filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::uint8_t& at(int x, int y, int ch) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  std::uint8_t at(int x, int y, int ch) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }

  bool operator==(const Raster&) const = default;
};

struct LabeledBox {
  int class_id = 0;
  BBox box;  // pixel corner form
};

// The id-ordered class vocabulary: trash, twig, nest, kite, bird, balloon.
const std::vector<std::string>& default_class_names();

// Parses "class cx cy w h" lines (normalized center form) into pixel corner
// boxes. Blank lines are skipped. Malformed lines, values outside their
// ranges, boxes escaping the unit square by more than 1e-6, or class ids
// outside [0, n_classes) raise std::runtime_error naming the line number.
std::vector<LabeledBox> parse_yolo_labels(const std::string& text, double image_w, double image_h,
                                          int n_classes = 6);

// Inverse of parse_yolo_labels; reals printed with 6 decimal places. Boxes
// outside the image (beyond a 1e-6 normalized tolerance) raise
// std::invalid_argument.
std::string serialize_yolo_labels(const std::vector<LabeledBox>& labels, double image_w,
                                  double image_h);

// Binary PPM (magic "P6", maxval 255). Header comments ('#' to end of line)
// are accepted anywhere between tokens. Wrong magic, maxval, or a truncated
// payload raise std::runtime_error. save(load(bytes)) preserves the pixel
// payload byte for byte.
Raster load_image_p6(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_image_p6(const Raster& r);
Raster load_image_p6_file(const std::filesystem::path& path);
void save_image_p6_file(const Raster& r, const std::filesystem::path& path);

// Seeded shuffle then contiguous cut. The first two splits get
// round(n * ratio) ids (capped by what remains) and the last absorbs the
// remainder, so 10 ids at 0.6/0.2/0.2 give sizes (6, 2, 2). Ratios must be
// positive and sum to 1 within 1e-9.
std::array<std::vector<std::string>, 3> split_dataset(std::vector<std::string> ids,
                                                      const std::array<double, 3>& ratios,
                                                      std::uint64_t seed);

// classes.txt: one class name per line, id order.
std::vector<std::string> load_class_names(const std::filesystem::path& file);

}  // namespace linekit
