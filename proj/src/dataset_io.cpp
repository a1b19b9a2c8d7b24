#include "linekit/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "linekit/rng.hpp"

namespace linekit {

namespace {

constexpr double kNormTolerance = 1e-6;

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& why) {
  throw std::runtime_error("label parse error at line " + std::to_string(line_no) + ": " + why);
}

// PPM header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line.
class PpmTokenizer {
 public:
  explicit PpmTokenizer(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string next_token() {
    skip_separators();
    std::string tok;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) throw std::runtime_error("ppm: truncated header");
    return tok;
  }

  // The header ends with exactly one whitespace byte before the payload.
  std::span<const std::uint8_t> payload_after_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw std::runtime_error("ppm: missing separator before pixel payload");
    }
    ++pos_;
    return bytes_.subspan(pos_);
  }

 private:
  static bool is_space(std::uint8_t b) {
    return b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\f' || b == '\v';
  }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int parse_ppm_int(const std::string& tok, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("ppm: bad ") + what);
  }
  if (used != tok.size() || v <= 0) throw std::runtime_error(std::string("ppm: bad ") + what);
  return v;
}

}  // namespace

Raster Raster::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("raster: dims must be positive");
  Raster out;
  out.width = width;
  out.height = height;
  out.pixels.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < out.pixels.size(); i += 3) {
    out.pixels[i] = r;
    out.pixels[i + 1] = g;
    out.pixels[i + 2] = b;
  }
  return out;
}

const std::vector<std::string>& default_class_names() {
  static const std::vector<std::string> names{"trash", "twig", "nest", "kite", "bird", "balloon"};
  return names;
}

std::vector<LabeledBox> parse_yolo_labels(const std::string& text, double image_w, double image_h,
                                          int n_classes) {
  if (!(image_w > 0.0 && image_h > 0.0)) {
    throw std::invalid_argument("parse_yolo_labels: image dims must be positive");
  }
  std::vector<LabeledBox> out;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream fields(line);
    long cls = 0;
    double cx = 0, cy = 0, w = 0, h = 0;
    if (!(fields >> cls)) {
      // Blank or whitespace-only lines are fine; anything else is not.
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) parse_fail(line_no, "expected 'class cx cy w h'");
      continue;
    }
    if (!(fields >> cx >> cy >> w >> h)) parse_fail(line_no, "expected 'class cx cy w h'");
    std::string extra;
    if (fields >> extra) parse_fail(line_no, "trailing tokens after 'class cx cy w h'");

    if (cls < 0 || cls >= n_classes) parse_fail(line_no, "unknown class id " + std::to_string(cls));
    if (!(cx >= 0.0 && cx <= 1.0) || !(cy >= 0.0 && cy <= 1.0)) {
      parse_fail(line_no, "center out of [0, 1]");
    }
    if (!(w > 0.0 && w <= 1.0) || !(h > 0.0 && h <= 1.0)) {
      parse_fail(line_no, "width/height out of (0, 1]");
    }
    if (cx - w / 2 < -kNormTolerance || cx + w / 2 > 1.0 + kNormTolerance ||
        cy - h / 2 < -kNormTolerance || cy + h / 2 > 1.0 + kNormTolerance) {
      parse_fail(line_no, "box escapes the unit square");
    }

    LabeledBox lb;
    lb.class_id = static_cast<int>(cls);
    lb.box = BBox{(cx - w / 2) * image_w, (cy - h / 2) * image_h,
                  (cx + w / 2) * image_w, (cy + h / 2) * image_h};
    if (!lb.box.valid()) parse_fail(line_no, "degenerate box");
    out.push_back(lb);
  }
  return out;
}

std::string serialize_yolo_labels(const std::vector<LabeledBox>& labels, double image_w,
                                  double image_h) {
  if (!(image_w > 0.0 && image_h > 0.0)) {
    throw std::invalid_argument("serialize_yolo_labels: image dims must be positive");
  }
  std::string out;
  char buf[160];
  for (const LabeledBox& lb : labels) {
    if (!lb.box.valid()) throw std::invalid_argument("serialize_yolo_labels: invalid box");
    const double cx = lb.box.center_x() / image_w;
    const double cy = lb.box.center_y() / image_h;
    const double w = lb.box.width() / image_w;
    const double h = lb.box.height() / image_h;
    if (cx - w / 2 < -kNormTolerance || cx + w / 2 > 1.0 + kNormTolerance ||
        cy - h / 2 < -kNormTolerance || cy + h / 2 > 1.0 + kNormTolerance) {
      throw std::invalid_argument("serialize_yolo_labels: box lies outside the image");
    }
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", lb.class_id, cx, cy, w, h);
    out += buf;
  }
  return out;
}

Raster load_image_p6(std::span<const std::uint8_t> bytes) {
  PpmTokenizer tok(bytes);
  if (tok.next_token() != "P6") throw std::runtime_error("ppm: wrong magic, expected P6");
  const int width = parse_ppm_int(tok.next_token(), "width");
  const int height = parse_ppm_int(tok.next_token(), "height");
  const int maxval = parse_ppm_int(tok.next_token(), "maxval");
  if (maxval != 255) throw std::runtime_error("ppm: only maxval 255 is supported");

  const std::span<const std::uint8_t> payload = tok.payload_after_single_space();
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (payload.size() < need) throw std::runtime_error("ppm: truncated pixel payload");

  Raster r;
  r.width = width;
  r.height = height;
  r.pixels.assign(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(need));
  return r;
}

std::vector<std::uint8_t> save_image_p6(const Raster& r) {
  if (r.width <= 0 || r.height <= 0 ||
      r.pixels.size() != static_cast<std::size_t>(r.width) * r.height * 3) {
    throw std::invalid_argument("ppm: raster shape does not match payload");
  }
  std::string header = "P6\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), r.pixels.begin(), r.pixels.end());
  return out;
}

Raster load_image_p6_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_image_p6(bytes);
}

void save_image_p6_file(const Raster& r, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = save_image_p6(r);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write on image file: " + path.string());
}

std::array<std::vector<std::string>, 3> split_dataset(std::vector<std::string> ids,
                                                      const std::array<double, 3>& ratios,
                                                      std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("split_dataset: ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split_dataset: ratios must sum to 1");

  // Fisher-Yates with the portable generator.
  SplitMix64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
    std::swap(ids[i - 1], ids[j]);
  }

  const std::size_t n = ids.size();
  std::array<std::size_t, 3> sizes{};
  std::size_t taken = 0;
  for (int s = 0; s < 2; ++s) {
    const auto want = static_cast<std::size_t>(std::lround(static_cast<double>(n) * ratios[s]));
    sizes[s] = std::min(want, n - taken);
    taken += sizes[s];
  }
  sizes[2] = n - taken;

  std::array<std::vector<std::string>, 3> out;
  std::size_t pos = 0;
  for (int s = 0; s < 3; ++s) {
    out[s].assign(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                  ids.begin() + static_cast<std::ptrdiff_t>(pos + sizes[s]));
    pos += sizes[s];
  }
  return out;
}

std::vector<std::string> load_class_names(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open class file: " + file.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  if (names.empty()) throw std::runtime_error("class file is empty: " + file.string());
  return names;
}

}  // namespace linekit
