#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace linekit {

struct Shape4 {
  int n = 0, c = 0, h = 0, w = 0;
  bool operator==(const Shape4&) const = default;
  std::size_t count() const;
};

// Dense NCHW tensor of doubles, row-major. Immutable by convention once
// built; every kernel below returns a fresh tensor.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(Shape4 shape, double fill = 0.0);
  Tensor4(Shape4 shape, std::vector<double> data);

  const Shape4& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  double& at(int n, int c, int y, int x) { return data_[flat(n, c, y, x)]; }
  double at(int n, int c, int y, int x) const { return data_[flat(n, c, y, x)]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  std::size_t flat(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x;
  }

  Shape4 shape_{};
  std::vector<double> data_;
};

// Row-major rows x cols matrix, for the per-position MLP work.
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  Matrix(int rows, int cols, std::vector<double> data);

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct ConvParams {
  int out_c = 0, in_c = 0, kh = 0, kw = 0;
  std::vector<double> weight;  // (out_c, in_c, kh, kw) row-major
  std::vector<double> bias;    // out_c entries, or empty for zero bias
  int stride = 1;
  int pad = 0;  // symmetric zero padding

  double w_at(int oc, int ic, int ky, int kx) const {
    return weight[((static_cast<std::size_t>(oc) * in_c + ic) * kh + ky) * kw + kx];
  }
  // Stride-1 convolution whose padding preserves spatial dims (odd kernel).
  bool same_pad() const { return stride == 1 && kh == kw && kh % 2 == 1 && pad == (kh - 1) / 2; }
};

ConvParams make_conv(int out_c, int in_c, int k, int stride = 1, int pad = 0);

enum class Activation { Sigmoid, Relu, Silu };

// Cross-correlation with zero padding. Output spatial dims follow
// floor((d + 2 pad - k) / stride) + 1. The accumulation order is fixed
// (in-channel outer, then ky, then kx) so results are bit-reproducible.
Tensor4 conv2d(const Tensor4& x, const ConvParams& p);

// Windowed max. Padded positions act as -inf and never win; pad < k keeps
// every window over at least one real element.
Tensor4 maxpool2d(const Tensor4& x, int k, int stride, int pad);

// x (rows x in_f) times weight (in_f x out_f) plus bias (out_f, may be empty).
Matrix dense(const Matrix& x, const Matrix& weight, std::span<const double> bias);

Tensor4 activation(const Tensor4& x, Activation kind);
double apply_activation(double v, Activation kind);

// Axis reorder: out dim k takes input dim order[k]. The inverse permutation
// round-trips bit-exactly.
Tensor4 permute(const Tensor4& x, const std::array<int, 4>& order);

// Channel concatenation; inputs must agree on n, h, w.
Tensor4 concat_channels(std::span<const Tensor4> xs);

// Uniform values in [lo, hi] from the portable generator; test/fixture plumbing.
Tensor4 random_tensor(Shape4 shape, std::uint64_t seed, double lo, double hi);

}  // namespace linekit
