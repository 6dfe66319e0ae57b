#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arconv/errors.hpp"
#include "arconv/rng.hpp"

namespace arconv {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t e : s) n *= e;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << 'x';
    os << s[i];
  }
  os << ']';
  return os.str();
}

// Dense row-major tensor. Conventions: images are HxWxC, batches NxHxWxC.
// The element buffer is shared and treated as immutable once a Tensor has
// been constructed, so copies are cheap and tensors can be handed across
// threads freely; all operations build fresh buffers.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape) { return full(std::move(shape), T{}); }

  static Tensor full(Shape shape, T value) {
    check_shape(shape);
    const std::size_t n = shape_size(shape);
    return Tensor(std::move(shape), std::make_shared<std::vector<T>>(n, value), 0);
  }

  static Tensor from_data(Shape shape, std::vector<T> values) {
    check_shape(shape);
    if (shape_size(shape) != values.size()) {
      throw ShapeError("Tensor::from_data: " + shape_str(shape) + " needs " +
                       std::to_string(shape_size(shape)) + " values, got " +
                       std::to_string(values.size()));
    }
    return Tensor(std::move(shape), std::make_shared<std::vector<T>>(std::move(values)), 0);
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const {
    assert(axis < shape_.size());
    return shape_[axis];
  }
  std::size_t size() const { return size_; }
  bool defined() const { return static_cast<bool>(data_); }

  const T* data() const {
    assert(data_);
    return data_->data() + offset_;
  }

  T flat(std::size_t i) const {
    assert(i < size_);
    return data()[i];
  }

  T at(std::size_t i, std::size_t j) const {
    assert(rank() == 2);
    return data()[i * shape_[1] + j];
  }
  T at(std::size_t i, std::size_t j, std::size_t c) const {
    assert(rank() == 3);
    return data()[(i * shape_[1] + j) * shape_[2] + c];
  }
  T at(std::size_t n, std::size_t i, std::size_t j, std::size_t c) const {
    assert(rank() == 4);
    return data()[((n * shape_[1] + i) * shape_[2] + j) * shape_[3] + c];
  }

  // Zero-copy view of subtensor `index` along axis 0 (e.g. one image out
  // of an NxHxWxC batch). The view shares the parent's buffer.
  Tensor slice_outer(std::size_t index) const {
    if (rank() < 2) throw ShapeError("slice_outer: rank must be >= 2");
    if (index >= shape_[0]) throw ShapeError("slice_outer: index out of range");
    Shape sub(shape_.begin() + 1, shape_.end());
    const std::size_t stride = shape_size(sub);
    return Tensor(std::move(sub), data_, offset_ + index * stride);
  }

  // Reinterpret with a new shape of identical total size; shares the buffer.
  Tensor reshaped(Shape new_shape) const {
    check_shape(new_shape);
    if (shape_size(new_shape) != size_) {
      throw ShapeError("reshaped: size mismatch " + shape_str(shape_) + " -> " +
                       shape_str(new_shape));
    }
    return Tensor(std::move(new_shape), data_, offset_);
  }

  bool all_finite() const {
    const T* p = data();
    for (std::size_t i = 0; i < size_; ++i) {
      if (!std::isfinite(static_cast<double>(p[i]))) return false;
    }
    return true;
  }

  std::vector<T> to_vector() const {
    const T* p = data();
    return std::vector<T>(p, p + size_);
  }

 private:
  Tensor(Shape shape, std::shared_ptr<std::vector<T>> data, std::size_t offset)
      : shape_(std::move(shape)), data_(std::move(data)), offset_(offset) {
    size_ = shape_size(shape_);
  }

  static void check_shape(const Shape& shape) {
    if (shape.empty()) throw ShapeError("Tensor: rank must be >= 1");
    for (std::size_t e : shape) {
      if (e == 0) throw ShapeError("Tensor: extents must be >= 1");
    }
  }

  Shape shape_;
  std::shared_ptr<std::vector<T>> data_;
  std::size_t offset_ = 0;
  std::size_t size_ = 0;
};

template <typename T>
inline bool same_shape(const Tensor<T>& a, const Tensor<T>& b) {
  return a.shape() == b.shape();
}

// --- construction helpers ----------------------------------------------

template <typename T>
Tensor<T> make_tensor(Shape shape, T fill_value) {
  return Tensor<T>::full(std::move(shape), fill_value);
}

template <typename T>
Tensor<T> make_tensor(Shape shape, std::vector<T> values) {
  return Tensor<T>::from_data(std::move(shape), std::move(values));
}

// Deterministic uniform[lo, hi) fill. Values are drawn in double and cast
// to T, so the f32 sequence is the rounded f64 sequence.
template <typename T>
Tensor<T> rand_uniform(Rng& rng, Shape shape, double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("rand_uniform: require lo < hi");
  const std::size_t n = shape_size(shape);
  std::vector<T> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<T>(rng.uniform(lo, hi));
  return Tensor<T>::from_data(std::move(shape), std::move(v));
}

template <typename T>
Tensor<T> rand_normal(Rng& rng, Shape shape, double mu, double sigma) {
  if (!(sigma > 0.0)) throw ArgumentError("rand_normal: require sigma > 0");
  const std::size_t n = shape_size(shape);
  std::vector<T> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<T>(rng.normal(mu, sigma));
  return Tensor<T>::from_data(std::move(shape), std::move(v));
}

// --- core operations ----------------------------------------------------

// Swap the leading two (spatial) axes; a trailing channel axis is untouched.
template <typename T>
Tensor<T> transpose_hw(const Tensor<T>& x) {
  if (x.rank() != 2 && x.rank() != 3) {
    throw ShapeError("transpose_hw: rank must be 2 or 3, got " + shape_str(x.shape()));
  }
  const std::size_t h = x.extent(0);
  const std::size_t w = x.extent(1);
  const std::size_t c = x.rank() == 3 ? x.extent(2) : 1;
  std::vector<T> out(x.size());
  const T* src = x.data();
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const T* s = src + (i * w + j) * c;
      T* d = out.data() + (j * h + i) * c;
      for (std::size_t ch = 0; ch < c; ++ch) d[ch] = s[ch];
    }
  }
  Shape shape = x.rank() == 3 ? Shape{w, h, c} : Shape{w, h};
  return Tensor<T>::from_data(std::move(shape), std::move(out));
}

// Mean absolute error over all elements. Accumulates in double.
template <typename T>
double mae(const Tensor<T>& a, const Tensor<T>& b) {
  if (!same_shape(a, b)) {
    throw ShapeError("mae: shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
  const T* pa = a.data();
  const T* pb = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::abs(static_cast<double>(pa[i]) - static_cast<double>(pb[i]));
  }
  return acc / static_cast<double>(a.size());
}

template <typename T>
double max_abs_diff(const Tensor<T>& a, const Tensor<T>& b) {
  if (!same_shape(a, b)) {
    throw ShapeError("max_abs_diff: shape mismatch " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  }
  const T* pa = a.data();
  const T* pb = b.data();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(pa[i]) - static_cast<double>(pb[i])));
  }
  return m;
}

template <typename T>
inline const char* dtype_name() {
  return sizeof(T) == 4 ? "f32" : "f64";
}

}  // namespace arconv
