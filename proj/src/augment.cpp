#include "linekit/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "linekit/parallel.hpp"
#include "linekit/rng.hpp"

namespace linekit {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void validate_spec(const AugmentSpec& spec) {
  for (double f : spec.brightness_factors) require(f >= 0.0, "augment: brightness factor must be >= 0");
  require(spec.sp_density >= 0.0 && spec.sp_density <= 1.0, "augment: noise density must lie in [0, 1]");
  const OcclusionSpec& o = spec.occlusion;
  // count_max == 0 disables occlusion outright.
  require(o.count_min >= 0 && o.count_max >= 0, "augment: occluder counts must be >= 0");
  require(o.count_max == 0 || o.count_max >= o.count_min, "augment: bad occluder count range");
  require(o.frac_min >= 0.0 && o.frac_max <= 1.0 && o.frac_min <= o.frac_max,
          "augment: occluder area fractions must lie in [0, 1]");
  require(o.max_overlap >= 0.0 && o.max_overlap <= 1.0, "augment: max_overlap must lie in [0, 1]");
}

// Exact remap for clockwise quarter turns; q in {1, 2, 3}.
Sample rotate_quarter(const Sample& s, int q) {
  const int w = s.image.width, h = s.image.height;
  const bool swap = (q != 2);
  Sample out;
  out.image.width = swap ? h : w;
  out.image.height = swap ? w : h;
  out.image.pixels.resize(s.image.pixels.size());

  for (int dy = 0; dy < out.image.height; ++dy) {
    for (int dx = 0; dx < out.image.width; ++dx) {
      int sx = 0, sy = 0;
      switch (q) {
        case 1: sx = dy;          sy = h - 1 - dx; break;
        case 2: sx = w - 1 - dx;  sy = h - 1 - dy; break;
        case 3: sx = w - 1 - dy;  sy = dx;         break;
      }
      for (int ch = 0; ch < 3; ++ch) out.image.at(dx, dy, ch) = s.image.at(sx, sy, ch);
    }
  }

  out.labels.reserve(s.labels.size());
  for (const LabeledBox& lb : s.labels) {
    const BBox& b = lb.box;
    BBox r;
    switch (q) {
      case 1: r = {h - b.y2, b.x1, h - b.y1, b.x2}; break;          // (x,y) -> (H-y, x)
      case 2: r = {w - b.x2, h - b.y2, w - b.x1, h - b.y1}; break;  // (x,y) -> (W-x, H-y)
      case 3: r = {b.y1, w - b.x2, b.y2, w - b.x1}; break;          // (x,y) -> (y, W-x)
    }
    out.labels.push_back({lb.class_id, r});
  }
  return out;
}

Sample rotate_arbitrary(const Sample& s, double angle_deg) {
  const int w = s.image.width, h = s.image.height;
  const double rad = angle_deg * kPi / 180.0;
  const double c = std::cos(rad), sn = std::sin(rad);

  // Canvas expanded to the rotated bounding rectangle.
  const int ow = std::max<int>(1, static_cast<int>(std::lround(std::abs(c) * w + std::abs(sn) * h)));
  const int oh = std::max<int>(1, static_cast<int>(std::lround(std::abs(sn) * w + std::abs(c) * h)));
  const double scx = w * 0.5, scy = h * 0.5;
  const double dcx = ow * 0.5, dcy = oh * 0.5;

  Sample out;
  out.image.width = ow;
  out.image.height = oh;
  out.image.pixels.assign(static_cast<std::size_t>(ow) * oh * 3, 0);

  // Nearest neighbor via the inverse map; off-image sources stay black.
  for (int dy = 0; dy < oh; ++dy) {
    for (int dx = 0; dx < ow; ++dx) {
      const double px = dx + 0.5 - dcx, py = dy + 0.5 - dcy;
      const double sx = c * px + sn * py + scx;
      const double sy = -sn * px + c * py + scy;
      const int ix = static_cast<int>(std::floor(sx));
      const int iy = static_cast<int>(std::floor(sy));
      if (ix < 0 || ix >= w || iy < 0 || iy >= h) continue;
      for (int ch = 0; ch < 3; ++ch) out.image.at(dx, dy, ch) = s.image.at(ix, iy, ch);
    }
  }

  for (const LabeledBox& lb : s.labels) {
    const BBox& b = lb.box;
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    const double xs[4] = {b.x1, b.x2, b.x1, b.x2};
    const double ys[4] = {b.y1, b.y1, b.y2, b.y2};
    for (int i = 0; i < 4; ++i) {
      const double px = xs[i] - scx, py = ys[i] - scy;
      const double rx = c * px - sn * py + dcx;
      const double ry = sn * px + c * py + dcy;
      min_x = std::min(min_x, rx);
      max_x = std::max(max_x, rx);
      min_y = std::min(min_y, ry);
      max_y = std::max(max_y, ry);
    }
    BBox hull{std::max(0.0, min_x), std::max(0.0, min_y),
              std::min(static_cast<double>(ow), max_x), std::min(static_cast<double>(oh), max_y)};
    if (hull.x2 > hull.x1 && hull.y2 > hull.y1 && hull.area() >= 1.0) {
      out.labels.push_back({lb.class_id, hull});
    }
  }
  return out;
}

double rect_box_overlap(const RectI& r, const BBox& b) {
  const double ix = std::max(0.0, std::min<double>(r.x + r.w, b.x2) - std::max<double>(r.x, b.x1));
  const double iy = std::max(0.0, std::min<double>(r.y + r.h, b.y2) - std::max<double>(r.y, b.y1));
  return ix * iy / b.area();
}

std::string format_number_tag(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  std::string tag(buf);
  for (char& ch : tag) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return tag;
}

struct TransformInstance {
  enum class Kind { Rotate, Brightness, SaltPepper, Occlude } kind;
  double value = 0.0;
  std::string tag;
};

std::vector<TransformInstance> enumerate_transforms(const AugmentSpec& spec) {
  std::vector<TransformInstance> out;
  for (double angle : spec.rotations) {
    out.push_back({TransformInstance::Kind::Rotate, angle, "rot" + format_number_tag(angle)});
  }
  for (double f : spec.brightness_factors) {
    out.push_back({TransformInstance::Kind::Brightness, f, "bright" + format_number_tag(f)});
  }
  if (spec.sp_density > 0.0) {
    out.push_back({TransformInstance::Kind::SaltPepper, spec.sp_density, "sp"});
  }
  if (spec.occlusion.count_max > 0) {
    out.push_back({TransformInstance::Kind::Occlude, 0.0, "occ"});
  }
  return out;
}

}  // namespace

Sample rotate_sample(const Sample& s, double angle_deg) {
  require(s.image.width > 0 && s.image.height > 0, "rotate_sample: empty image");
  require(std::isfinite(angle_deg), "rotate_sample: angle must be finite");

  double m = std::fmod(angle_deg, 360.0);
  if (m < 0) m += 360.0;
  if (m == 0.0) return s;
  if (m == 90.0) return rotate_quarter(s, 1);
  if (m == 180.0) return rotate_quarter(s, 2);
  if (m == 270.0) return rotate_quarter(s, 3);
  return rotate_arbitrary(s, m);
}

Raster adjust_brightness(const Raster& img, double factor) {
  require(factor >= 0.0 && std::isfinite(factor), "adjust_brightness: factor must be finite and >= 0");
  Raster out = img;
  for (std::uint8_t& v : out.pixels) {
    const double scaled = std::round(v * factor);
    v = static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
  }
  return out;
}

Raster salt_pepper(const Raster& img, double density, std::uint64_t seed) {
  require(density >= 0.0 && density <= 1.0, "salt_pepper: density must lie in [0, 1]");
  Raster out = img;
  SplitMix64 rng(seed);
  const std::size_t n_pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t p = 0; p < n_pixels; ++p) {
    if (rng.next_double() < density) {
      const std::uint8_t v = rng.coin() ? 255 : 0;
      out.pixels[p * 3] = v;
      out.pixels[p * 3 + 1] = v;
      out.pixels[p * 3 + 2] = v;
    }
  }
  return out;
}

std::vector<RectI> plan_occluders(int width, int height, const std::vector<LabeledBox>& labels,
                                  const OcclusionSpec& spec, std::uint64_t seed) {
  require(width > 0 && height > 0, "plan_occluders: empty image");
  if (spec.count_max == 0) return {};
  SplitMix64 rng(seed);
  const int count =
      spec.count_min +
      (spec.count_max > spec.count_min
           ? static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(spec.count_max - spec.count_min) + 1))
           : 0);

  std::vector<RectI> rects;
  const double image_area = static_cast<double>(width) * height;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double frac = rng.uniform(spec.frac_min, spec.frac_max);
      const double aspect = rng.uniform(0.5, 2.0);
      const double area = frac * image_area;
      int pw = static_cast<int>(std::lround(std::sqrt(area * aspect)));
      int ph = static_cast<int>(std::lround(std::sqrt(area / aspect)));
      pw = std::clamp(pw, 1, width);
      ph = std::clamp(ph, 1, height);
      RectI r;
      r.w = pw;
      r.h = ph;
      r.x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(width - pw) + 1));
      r.y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(height - ph) + 1));

      bool ok = true;
      for (const LabeledBox& lb : labels) {
        if (rect_box_overlap(r, lb.box) > spec.max_overlap) {
          ok = false;
          break;
        }
      }
      if (ok) {
        rects.push_back(r);
        break;
      }
    }
  }
  return rects;
}

Sample occlude_sample(const Sample& s, const OcclusionSpec& spec, std::uint64_t seed) {
  Sample out = s;
  for (const RectI& r : plan_occluders(s.image.width, s.image.height, s.labels, spec, seed)) {
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        out.image.at(x, y, 0) = 128;
        out.image.at(x, y, 1) = 128;
        out.image.at(x, y, 2) = 128;
      }
    }
  }
  return out;
}

std::vector<NamedSample> run_pipeline(const std::vector<NamedSample>& samples,
                                      const AugmentSpec& spec) {
  validate_spec(spec);
  const std::vector<TransformInstance> transforms = enumerate_transforms(spec);
  const std::size_t per_sample = transforms.size() + 1;

  std::vector<NamedSample> out(samples.size() * per_sample);
  parallel_for(samples.size(), [&](std::size_t si) {
    const NamedSample& in = samples[si];
    out[si * per_sample] = in;
    for (std::size_t ti = 0; ti < transforms.size(); ++ti) {
      const TransformInstance& t = transforms[ti];
      const std::uint64_t s = derive_seed(spec.seed, si, ti);
      NamedSample v;
      v.name = in.name + "__" + t.tag;
      switch (t.kind) {
        case TransformInstance::Kind::Rotate:
          v.sample = rotate_sample(in.sample, t.value);
          break;
        case TransformInstance::Kind::Brightness:
          v.sample = {adjust_brightness(in.sample.image, t.value), in.sample.labels};
          break;
        case TransformInstance::Kind::SaltPepper:
          v.sample = {salt_pepper(in.sample.image, t.value, s), in.sample.labels};
          break;
        case TransformInstance::Kind::Occlude:
          v.sample = occlude_sample(in.sample, spec.occlusion, s);
          break;
      }
      out[si * per_sample + ti + 1] = std::move(v);
    }
  });
  return out;
}

}  // namespace linekit
