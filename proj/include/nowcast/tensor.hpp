#pragma once

// Dense row-major n-dimensional array templated on scalar, plus the free
// functions the rest of the library composes. Eigen::Map views provide all
// matrix products; the tensor itself owns contiguous storage.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "nowcast/common.hpp"

namespace nowcast {

using Shape = std::vector<Index>;

inline Index numel(const Shape& s) {
  Index n = 1;
  for (Index d : s) n *= d;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

template <typename Scalar>
class Tensor {
 public:
  using value_type = Scalar;

  Tensor() = default;
  explicit Tensor(Shape shape)
      : shape_(std::move(shape)), data_(static_cast<size_t>(numel(shape_)), Scalar(0)) {}
  Tensor(Shape shape, Scalar fill)
      : shape_(std::move(shape)), data_(static_cast<size_t>(numel(shape_)), fill) {}
  Tensor(Shape shape, std::vector<Scalar> values)
      : shape_(std::move(shape)), data_(std::move(values)) {
    data_check(static_cast<Index>(data_.size()) == numel(shape_),
               "tensor: value count does not match shape " + shape_str(shape_));
  }

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
  static Tensor full(Shape shape, Scalar v) { return Tensor(std::move(shape), v); }

  Index size() const { return static_cast<Index>(data_.size()); }
  bool empty() const { return data_.empty(); }
  int rank() const { return static_cast<int>(shape_.size()); }
  const Shape& shape() const { return shape_; }
  Index dim(int i) const { return shape_[static_cast<size_t>(i)]; }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  Scalar& operator[](Index i) { return data_[static_cast<size_t>(i)]; }
  const Scalar& operator[](Index i) const { return data_[static_cast<size_t>(i)]; }

  Scalar& operator()(Index i) { return data_[static_cast<size_t>(i)]; }
  const Scalar& operator()(Index i) const { return data_[static_cast<size_t>(i)]; }
  Scalar& operator()(Index i, Index j) { return data_[static_cast<size_t>(i * shape_[1] + j)]; }
  const Scalar& operator()(Index i, Index j) const {
    return data_[static_cast<size_t>(i * shape_[1] + j)];
  }
  Scalar& operator()(Index i, Index j, Index k) {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  const Scalar& operator()(Index i, Index j, Index k) const {
    return data_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  Scalar& operator()(Index i, Index j, Index k, Index l) {
    return data_[static_cast<size_t>(((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
  }
  const Scalar& operator()(Index i, Index j, Index k, Index l) const {
    return data_[static_cast<size_t>(((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l)];
  }
  Scalar& operator()(Index i, Index j, Index k, Index l, Index m) {
    return data_[static_cast<size_t>(
        (((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l) * shape_[4] + m)];
  }
  const Scalar& operator()(Index i, Index j, Index k, Index l, Index m) const {
    return data_[static_cast<size_t>(
        (((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l) * shape_[4] + m)];
  }

  // Eigen views over the flat storage.
  auto array() {
    return Eigen::Map<Eigen::Array<Scalar, Eigen::Dynamic, 1>>(data_.data(),
                                                               static_cast<Index>(data_.size()));
  }
  auto array() const {
    return Eigen::Map<const Eigen::Array<Scalar, Eigen::Dynamic, 1>>(
        data_.data(), static_cast<Index>(data_.size()));
  }
  auto mat(Index rows, Index cols) {
    return Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data_.data(), rows, cols);
  }
  auto mat(Index rows, Index cols) const {
    return Eigen::Map<
        const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data_.data(), rows, cols);
  }

  void set_shape(Shape s) {
    data_check(numel(s) == size(), "tensor: reshape size mismatch");
    shape_ = std::move(s);
  }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

 private:
  Shape shape_;
  std::vector<Scalar> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;
using TensorU8 = Tensor<std::uint8_t>;

// ---------------------------------------------------------------------------
// Shape helpers

inline Shape row_major_strides(const Shape& shape) {
  Shape st(shape.size(), 1);
  for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i)
    st[static_cast<size_t>(i)] = st[static_cast<size_t>(i) + 1] * shape[static_cast<size_t>(i) + 1];
  return st;
}

// ---------------------------------------------------------------------------
// Free functions

template <typename S>
Tensor<S> reshape(Tensor<S> t, Shape shape) {
  t.set_shape(std::move(shape));
  return t;
}

template <typename S>
Tensor<S> permute(const Tensor<S>& t, const std::vector<int>& axes) {
  const int r = t.rank();
  data_check(static_cast<int>(axes.size()) == r, "permute: axes rank mismatch");
  Shape out_shape(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) out_shape[static_cast<size_t>(i)] = t.dim(axes[static_cast<size_t>(i)]);
  Tensor<S> out(out_shape);
  const Shape in_strides = row_major_strides(t.shape());
  // stride of output axis i in the input layout
  Shape map_strides(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i)
    map_strides[static_cast<size_t>(i)] = in_strides[static_cast<size_t>(axes[static_cast<size_t>(i)])];
  std::vector<Index> idx(static_cast<size_t>(r), 0);
  const Index n = out.size();
  S* od = out.data();
  const S* id = t.data();
  Index src = 0;
  for (Index flat = 0; flat < n; ++flat) {
    od[flat] = id[src];
    for (int ax = r - 1; ax >= 0; --ax) {
      auto a = static_cast<size_t>(ax);
      if (++idx[a] < out_shape[a]) {
        src += map_strides[a];
        break;
      }
      src -= map_strides[a] * (out_shape[a] - 1);
      idx[a] = 0;
    }
  }
  return out;
}

template <typename S>
Tensor<S> slice(const Tensor<S>& t, int axis, Index start, Index len) {
  data_check(axis >= 0 && axis < t.rank(), "slice: bad axis");
  data_check(start >= 0 && len >= 0 && start + len <= t.dim(axis), "slice: out of range");
  Shape out_shape = t.shape();
  out_shape[static_cast<size_t>(axis)] = len;
  Tensor<S> out(out_shape);
  Index outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= t.dim(i);
  for (int i = axis + 1; i < t.rank(); ++i) inner *= t.dim(i);
  const Index in_axis = t.dim(axis);
  const S* id = t.data();
  S* od = out.data();
  for (Index o = 0; o < outer; ++o)
    std::copy_n(id + (o * in_axis + start) * inner, len * inner, od + o * len * inner);
  return out;
}

template <typename S>
Tensor<S> concat(const std::vector<const Tensor<S>*>& xs, int axis) {
  data_check(!xs.empty(), "concat: empty input list");
  Shape out_shape = xs[0]->shape();
  Index axis_total = 0;
  for (const auto* x : xs) {
    data_check(x->rank() == xs[0]->rank(), "concat: rank mismatch");
    for (int i = 0; i < x->rank(); ++i)
      if (i != axis)
        data_check(x->dim(i) == xs[0]->dim(i), "concat: shape mismatch off-axis");
    axis_total += x->dim(axis);
  }
  out_shape[static_cast<size_t>(axis)] = axis_total;
  Tensor<S> out(out_shape);
  Index outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= out.dim(i);
  for (int i = axis + 1; i < out.rank(); ++i) inner *= out.dim(i);
  S* od = out.data();
  for (Index o = 0; o < outer; ++o) {
    Index off = 0;
    for (const auto* x : xs) {
      const Index len = x->dim(axis) * inner;
      std::copy_n(x->data() + o * len, len, od + (o * axis_total + off) * inner);
      off += x->dim(axis);
    }
  }
  return out;
}

template <typename S>
Tensor<S> concat(const Tensor<S>& a, const Tensor<S>& b, int axis) {
  return concat<S>({&a, &b}, axis);
}

// C = A(m,k) * B(k,n)
template <typename S>
Tensor<S> matmul(const Tensor<S>& a, const Tensor<S>& b) {
  data_check(a.rank() == 2 && b.rank() == 2 && a.dim(1) == b.dim(0), "matmul: shape mismatch");
  Tensor<S> c({a.dim(0), b.dim(1)});
  c.mat(a.dim(0), b.dim(1)).noalias() = a.mat(a.dim(0), a.dim(1)) * b.mat(b.dim(0), b.dim(1));
  return c;
}

template <typename S>
double sum(const Tensor<S>& t) {
  double acc = 0;
  const S* d = t.data();
  for (Index i = 0; i < t.size(); ++i) acc += static_cast<double>(d[i]);
  return acc;
}

template <typename S>
double mean(const Tensor<S>& t) {
  data_check(t.size() > 0, "mean: empty tensor");
  return sum(t) / static_cast<double>(t.size());
}

template <typename S>
S max_value(const Tensor<S>& t) {
  data_check(t.size() > 0, "max: empty tensor");
  return *std::max_element(t.data(), t.data() + t.size());
}

template <typename S>
bool all_finite(const Tensor<S>& t) {
  const S* d = t.data();
  for (Index i = 0; i < t.size(); ++i)
    if (!std::isfinite(static_cast<double>(d[i]))) return false;
  return true;
}

template <typename S, typename F>
Tensor<S> map(const Tensor<S>& t, F&& f) {
  Tensor<S> out(t.shape());
  const S* id = t.data();
  S* od = out.data();
  for (Index i = 0; i < t.size(); ++i) od[i] = f(id[i]);
  return out;
}

template <typename A, typename B>
Tensor<B> cast(const Tensor<A>& t) {
  Tensor<B> out(t.shape());
  const A* id = t.data();
  B* od = out.data();
  for (Index i = 0; i < t.size(); ++i) od[i] = static_cast<B>(id[i]);
  return out;
}

template <typename S>
Tensor<S> operator+(const Tensor<S>& a, const Tensor<S>& b) {
  data_check(a.same_shape(b), "tensor +: shape mismatch");
  Tensor<S> c(a.shape());
  c.array() = a.array() + b.array();
  return c;
}

template <typename S>
Tensor<S> operator-(const Tensor<S>& a, const Tensor<S>& b) {
  data_check(a.same_shape(b), "tensor -: shape mismatch");
  Tensor<S> c(a.shape());
  c.array() = a.array() - b.array();
  return c;
}

template <typename S>
Tensor<S> operator*(const Tensor<S>& a, const Tensor<S>& b) {
  data_check(a.same_shape(b), "tensor *: shape mismatch");
  Tensor<S> c(a.shape());
  c.array() = a.array() * b.array();
  return c;
}

template <typename S>
Tensor<S> operator*(const Tensor<S>& a, S s) {
  Tensor<S> c(a.shape());
  c.array() = a.array() * s;
  return c;
}

template <typename S>
bool allclose(const Tensor<S>& a, const Tensor<S>& b, double atol = 1e-6, double rtol = 0.0) {
  if (!a.same_shape(b)) return false;
  for (Index i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]), y = static_cast<double>(b[i]);
    if (std::abs(x - y) > atol + rtol * std::abs(y)) return false;
  }
  return true;
}

template <typename S>
bool bit_equal(const Tensor<S>& a, const Tensor<S>& b) {
  if (!a.same_shape(b)) return false;
  return std::equal(a.data(), a.data() + a.size(), b.data());
}

}  // namespace nowcast
