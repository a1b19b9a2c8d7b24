#include "linekit/tensor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "linekit/rng.hpp"

namespace linekit {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

int out_extent(int in, int k, int stride, int pad) {
  return (in + 2 * pad - k) / stride + 1;
}

}  // namespace

std::size_t Shape4::count() const {
  return static_cast<std::size_t>(n) * c * h * w;
}

Tensor4::Tensor4(Shape4 shape, double fill) : shape_(shape) {
  require(shape.n > 0 && shape.c > 0 && shape.h > 0 && shape.w > 0, "tensor: dims must be positive");
  data_.assign(shape.count(), fill);
}

Tensor4::Tensor4(Shape4 shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  require(shape.n > 0 && shape.c > 0 && shape.h > 0 && shape.w > 0, "tensor: dims must be positive");
  require(data_.size() == shape.count(), "tensor: data length does not match shape");
}

Matrix::Matrix(int rows, int cols, double fill) : rows(rows), cols(cols) {
  require(rows > 0 && cols > 0, "matrix: dims must be positive");
  data.assign(static_cast<std::size_t>(rows) * cols, fill);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data_in)
    : rows(rows), cols(cols), data(std::move(data_in)) {
  require(rows > 0 && cols > 0, "matrix: dims must be positive");
  require(data.size() == static_cast<std::size_t>(rows) * cols, "matrix: data length does not match shape");
}

ConvParams make_conv(int out_c, int in_c, int k, int stride, int pad) {
  require(out_c > 0 && in_c > 0 && k > 0, "conv: channel and kernel dims must be positive");
  ConvParams p;
  p.out_c = out_c;
  p.in_c = in_c;
  p.kh = p.kw = k;
  p.stride = stride;
  p.pad = pad;
  p.weight.assign(static_cast<std::size_t>(out_c) * in_c * k * k, 0.0);
  p.bias.assign(out_c, 0.0);
  return p;
}

Tensor4 conv2d(const Tensor4& x, const ConvParams& p) {
  const Shape4& s = x.shape();
  require(p.out_c > 0 && p.in_c > 0 && p.kh > 0 && p.kw > 0, "conv2d: bad kernel dims");
  require(p.stride >= 1 && p.pad >= 0, "conv2d: stride must be >= 1 and pad >= 0");
  require(s.c == p.in_c, "conv2d: input channel count does not match weights");
  require(p.weight.size() == static_cast<std::size_t>(p.out_c) * p.in_c * p.kh * p.kw,
          "conv2d: weight length does not match kernel dims");
  require(p.bias.empty() || p.bias.size() == static_cast<std::size_t>(p.out_c),
          "conv2d: bias length does not match out channels");

  const int oh = out_extent(s.h, p.kh, p.stride, p.pad);
  const int ow = out_extent(s.w, p.kw, p.stride, p.pad);
  require(oh >= 1 && ow >= 1, "conv2d: output spatial dims collapse to zero");

  Tensor4 y({s.n, p.out_c, oh, ow});
  for (int n = 0; n < s.n; ++n) {
    for (int oc = 0; oc < p.out_c; ++oc) {
      const double b = p.bias.empty() ? 0.0 : p.bias[oc];
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          double acc = b;
          for (int ic = 0; ic < p.in_c; ++ic) {
            for (int ky = 0; ky < p.kh; ++ky) {
              const int iy = oy * p.stride + ky - p.pad;
              if (iy < 0 || iy >= s.h) continue;
              for (int kx = 0; kx < p.kw; ++kx) {
                const int ix = ox * p.stride + kx - p.pad;
                if (ix < 0 || ix >= s.w) continue;
                acc += x.at(n, ic, iy, ix) * p.w_at(oc, ic, ky, kx);
              }
            }
          }
          y.at(n, oc, oy, ox) = acc;
        }
      }
    }
  }
  return y;
}

Tensor4 maxpool2d(const Tensor4& x, int k, int stride, int pad) {
  require(k >= 1, "maxpool2d: kernel must be positive");
  require(stride >= 1, "maxpool2d: stride must be >= 1");
  require(pad >= 0 && pad < k, "maxpool2d: pad must satisfy 0 <= pad < k");
  const Shape4& s = x.shape();
  const int oh = out_extent(s.h, k, stride, pad);
  const int ow = out_extent(s.w, k, stride, pad);
  require(oh >= 1 && ow >= 1, "maxpool2d: output spatial dims collapse to zero");

  Tensor4 y({s.n, s.c, oh, ow});
  for (int n = 0; n < s.n; ++n) {
    for (int c = 0; c < s.c; ++c) {
      for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
          double best = -std::numeric_limits<double>::infinity();
          for (int ky = 0; ky < k; ++ky) {
            const int iy = oy * stride + ky - pad;
            if (iy < 0 || iy >= s.h) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = ox * stride + kx - pad;
              if (ix < 0 || ix >= s.w) continue;
              best = std::max(best, x.at(n, c, iy, ix));
            }
          }
          y.at(n, c, oy, ox) = best;
        }
      }
    }
  }
  return y;
}

Matrix dense(const Matrix& x, const Matrix& weight, std::span<const double> bias) {
  require(x.cols == weight.rows, "dense: inner dims do not agree");
  require(bias.empty() || bias.size() == static_cast<std::size_t>(weight.cols),
          "dense: bias length does not match out features");
  Matrix y(x.rows, weight.cols);
  for (int r = 0; r < x.rows; ++r) {
    for (int j = 0; j < weight.cols; ++j) {
      double acc = bias.empty() ? 0.0 : bias[j];
      for (int k = 0; k < x.cols; ++k) {
        acc += x.at(r, k) * weight.at(k, j);
      }
      y.at(r, j) = acc;
    }
  }
  return y;
}

double apply_activation(double v, Activation kind) {
  switch (kind) {
    case Activation::Sigmoid:
      return 1.0 / (1.0 + std::exp(-v));
    case Activation::Relu:
      return v > 0.0 ? v : 0.0;
    case Activation::Silu:
      return v / (1.0 + std::exp(-v));
  }
  throw std::invalid_argument("activation: unknown kind");
}

Tensor4 activation(const Tensor4& x, Activation kind) {
  Tensor4 y = x;
  for (double& v : y.data()) v = apply_activation(v, kind);
  return y;
}

Tensor4 permute(const Tensor4& x, const std::array<int, 4>& order) {
  std::array<bool, 4> seen{false, false, false, false};
  for (int o : order) {
    if (o < 0 || o > 3 || seen[o]) throw std::invalid_argument("permute: order is not a permutation of 0..3");
    seen[o] = true;
  }
  const std::array<int, 4> in{x.shape().n, x.shape().c, x.shape().h, x.shape().w};
  Tensor4 y({in[order[0]], in[order[1]], in[order[2]], in[order[3]]});

  std::array<int, 4> oi{};  // output index; input index ii satisfies ii[order[k]] = oi[k]
  for (oi[0] = 0; oi[0] < in[order[0]]; ++oi[0]) {
    for (oi[1] = 0; oi[1] < in[order[1]]; ++oi[1]) {
      for (oi[2] = 0; oi[2] < in[order[2]]; ++oi[2]) {
        for (oi[3] = 0; oi[3] < in[order[3]]; ++oi[3]) {
          std::array<int, 4> ii{};
          for (int k = 0; k < 4; ++k) ii[order[k]] = oi[k];
          y.at(oi[0], oi[1], oi[2], oi[3]) = x.at(ii[0], ii[1], ii[2], ii[3]);
        }
      }
    }
  }
  return y;
}

Tensor4 concat_channels(std::span<const Tensor4> xs) {
  require(!xs.empty(), "concat_channels: need at least one input");
  const Shape4& s0 = xs.front().shape();
  int total_c = 0;
  for (const Tensor4& x : xs) {
    const Shape4& s = x.shape();
    require(s.n == s0.n && s.h == s0.h && s.w == s0.w, "concat_channels: n/h/w mismatch");
    total_c += s.c;
  }
  Tensor4 y({s0.n, total_c, s0.h, s0.w});
  for (int n = 0; n < s0.n; ++n) {
    int c_off = 0;
    for (const Tensor4& x : xs) {
      for (int c = 0; c < x.shape().c; ++c) {
        for (int yy = 0; yy < s0.h; ++yy) {
          for (int xx = 0; xx < s0.w; ++xx) {
            y.at(n, c_off + c, yy, xx) = x.at(n, c, yy, xx);
          }
        }
      }
      c_off += x.shape().c;
    }
  }
  return y;
}

Tensor4 random_tensor(Shape4 shape, std::uint64_t seed, double lo, double hi) {
  Tensor4 t(shape);
  SplitMix64 rng(seed);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace linekit
