#pragma once

#include <cstddef>
#include <vector>

#include "arconv/errors.hpp"
#include "arconv/tensor.hpp"

namespace arconv {

enum class Padding { kSame, kValid };

// flip=true is mathematical convolution (kernel rotated 180 degrees),
// flip=false is cross-correlation. Learned layers default to flip=false;
// the worked-example reproductions require flip=true.
struct ConvSpec {
  int kernel_size = 3;
  int stride = 1;
  Padding padding = Padding::kSame;
  bool flip = false;
};

enum class Axis { kCols, kRows };  // kCols = vertical n x 1 support

// One shared 1D depthwise kernel: one length-n weight vector per input
// channel, plus an optional per-channel bias.
template <typename T>
struct ArConvKernel {
  Tensor<T> weight;  // C x n (or plain length-n for single-channel use)
  Tensor<T> bias;    // length C, or default-constructed for "no bias"

  bool has_bias() const { return bias.defined(); }
};

template <typename T>
ArConvKernel<T> make_arconv_kernel(Tensor<T> weight) {
  return ArConvKernel<T>{std::move(weight), Tensor<T>{}};
}

template <typename T>
ArConvKernel<T> make_arconv_kernel(Tensor<T> weight, Tensor<T> bias) {
  return ArConvKernel<T>{std::move(weight), std::move(bias)};
}

namespace detail {

inline void check_kernel_size(int n) {
  if (n < 1 || n % 2 == 0) {
    throw ArgumentError("kernel size must be odd and positive, got " + std::to_string(n));
  }
}

inline std::size_t out_extent(std::size_t in, int n, int stride, Padding padding) {
  if (padding == Padding::kSame) {
    return (in + static_cast<std::size_t>(stride) - 1) / static_cast<std::size_t>(stride);
  }
  if (in < static_cast<std::size_t>(n)) {
    throw ShapeError("valid padding: input extent smaller than kernel");
  }
  return (in - static_cast<std::size_t>(n)) / static_cast<std::size_t>(stride) + 1;
}

// Offset of kernel tap i relative to the output anchor row/column.
inline long tap_offset(int i, int center, bool flip) {
  return flip ? static_cast<long>(center - i) : static_cast<long>(i - center);
}

// Normalizes a 1D depthwise weight tensor to (C, n) extents.
template <typename T>
inline void line_kernel_dims(const Tensor<T>& w, std::size_t channels, std::size_t& c,
                             std::size_t& n) {
  if (w.rank() == 1) {
    c = 1;
    n = w.extent(0);
  } else if (w.rank() == 2) {
    c = w.extent(0);
    n = w.extent(1);
  } else {
    throw ShapeError("1D depthwise weight must have rank 1 or 2, got " + shape_str(w.shape()));
  }
  if (c != channels) {
    throw ShapeError("1D depthwise weight: " + std::to_string(c) + " kernels for " +
                     std::to_string(channels) + " channels");
  }
  check_kernel_size(static_cast<int>(n));
}

}  // namespace detail

// --- 2D convolution on a single plane -----------------------------------

// out[m,l] = sum_{i,j} k[i,j] * x[m*s + o(i), l*s + o(j)] with zero
// extension for same padding; o(i) = c - i when flipped, i - c otherwise.
template <typename T>
Tensor<T> conv2d_plane(const Tensor<T>& x, const Tensor<T>& k, const ConvSpec& spec) {
  if (x.rank() != 2) throw ShapeError("conv2d_plane: input must be HxW");
  if (k.rank() != 2 || k.extent(0) != k.extent(1)) {
    throw ShapeError("conv2d_plane: kernel must be square nxn");
  }
  const int n = static_cast<int>(k.extent(0));
  detail::check_kernel_size(n);
  if (spec.stride != 1 && spec.stride != 2) {
    throw ArgumentError("conv2d_plane: stride must be 1 or 2");
  }
  const int c = n / 2;
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const std::size_t oh = detail::out_extent(x.extent(0), n, spec.stride, spec.padding);
  const std::size_t ow = detail::out_extent(x.extent(1), n, spec.stride, spec.padding);
  const long base = spec.padding == Padding::kValid ? c : 0;

  std::vector<T> out(oh * ow, T{});
  const T* px = x.data();
  const T* pk = k.data();
  for (std::size_t m = 0; m < oh; ++m) {
    for (std::size_t l = 0; l < ow; ++l) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const long r = static_cast<long>(m) * spec.stride + base + detail::tap_offset(i, c, spec.flip);
        if (r < 0 || r >= h) continue;
        for (int j = 0; j < n; ++j) {
          const long q = static_cast<long>(l) * spec.stride + base + detail::tap_offset(j, c, spec.flip);
          if (q < 0 || q >= w) continue;
          acc += static_cast<double>(pk[i * n + j]) * static_cast<double>(px[r * w + q]);
        }
      }
      out[m * ow + l] = static_cast<T>(acc);
    }
  }
  return Tensor<T>::from_data({oh, ow}, std::move(out));
}

// --- 1D depthwise line convolution --------------------------------------

namespace detail {

// Shared implementation: axis=kCols convolves within each column (vertical
// n x 1 support), axis=kRows within each row. Stride 1, same padding.
template <typename T>
Tensor<T> line_conv_impl(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias,
                         Axis axis, bool flip) {
  if (x.rank() != 2 && x.rank() != 3) {
    throw ShapeError("line_conv: input must be HxW or HxWxC");
  }
  const std::size_t h = x.extent(0);
  const std::size_t w = x.extent(1);
  const std::size_t cc = x.rank() == 3 ? x.extent(2) : 1;
  std::size_t kc = 0, kn = 0;
  line_kernel_dims(weight, cc, kc, kn);
  if (bias.defined() && bias.size() != cc) {
    throw ShapeError("line_conv: bias length must equal channel count");
  }
  const int n = static_cast<int>(kn);
  const int center = n / 2;

  std::vector<T> out(x.size(), T{});
  const T* px = x.data();
  const T* pw = weight.data();
  const std::size_t row_stride = w * cc;
  std::vector<T> wtap(cc);

  for (int i = 0; i < n; ++i) {
    for (std::size_t ch = 0; ch < cc; ++ch) wtap[ch] = pw[ch * kn + static_cast<std::size_t>(i)];
    const long off = tap_offset(i, center, flip);
    if (axis == Axis::kCols) {
      const long lo = std::max<long>(0, -off);
      const long hi = std::min<long>(static_cast<long>(h), static_cast<long>(h) - off);
      for (long m = lo; m < hi; ++m) {
        T* dst = out.data() + static_cast<std::size_t>(m) * row_stride;
        const T* src = px + static_cast<std::size_t>(m + off) * row_stride;
        if (cc == 1) {
          const T wv = wtap[0];
          for (std::size_t l = 0; l < w; ++l) dst[l] += wv * src[l];
        } else {
          for (std::size_t l = 0; l < w; ++l) {
            T* d = dst + l * cc;
            const T* s = src + l * cc;
            for (std::size_t ch = 0; ch < cc; ++ch) d[ch] += wtap[ch] * s[ch];
          }
        }
      }
    } else {
      const long lo = std::max<long>(0, -off);
      const long hi = std::min<long>(static_cast<long>(w), static_cast<long>(w) - off);
      for (std::size_t m = 0; m < h; ++m) {
        T* dst = out.data() + m * row_stride;
        const T* src = px + m * row_stride;
        if (cc == 1) {
          const T wv = wtap[0];
          for (long l = lo; l < hi; ++l) dst[l] += wv * src[l + off];
        } else {
          for (long l = lo; l < hi; ++l) {
            T* d = dst + static_cast<std::size_t>(l) * cc;
            const T* s = src + static_cast<std::size_t>(l + off) * cc;
            for (std::size_t ch = 0; ch < cc; ++ch) d[ch] += wtap[ch] * s[ch];
          }
        }
      }
    }
  }
  if (bias.defined()) {
    const T* pb = bias.data();
    for (std::size_t p = 0; p < h * w; ++p) {
      T* d = out.data() + p * cc;
      for (std::size_t ch = 0; ch < cc; ++ch) d[ch] += pb[ch];
    }
  }
  return Tensor<T>::from_data(Shape(x.shape()), std::move(out));
}

// grad wrt the line kernel: gw[ch,i] = sum_{m,l} gout[m,l,ch] * input shifted
// by tap i along `axis`. Two product-rule call sites feed arconv_backward.
template <typename T>
void line_conv_grad_weight(const Tensor<T>& input, const Tensor<T>& gout, Axis axis, bool flip,
                           int n, std::vector<double>& gw) {
  const std::size_t h = input.extent(0);
  const std::size_t w = input.extent(1);
  const std::size_t cc = input.rank() == 3 ? input.extent(2) : 1;
  const int center = n / 2;
  const T* px = input.data();
  const T* pg = gout.data();
  const std::size_t row_stride = w * cc;

  for (int i = 0; i < n; ++i) {
    const long off = tap_offset(i, center, flip);
    if (axis == Axis::kCols) {
      const long lo = std::max<long>(0, -off);
      const long hi = std::min<long>(static_cast<long>(h), static_cast<long>(h) - off);
      for (long m = lo; m < hi; ++m) {
        const T* g = pg + static_cast<std::size_t>(m) * row_stride;
        const T* s = px + static_cast<std::size_t>(m + off) * row_stride;
        for (std::size_t l = 0; l < w; ++l) {
          for (std::size_t ch = 0; ch < cc; ++ch) {
            gw[ch * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] +=
                static_cast<double>(g[l * cc + ch]) * static_cast<double>(s[l * cc + ch]);
          }
        }
      }
    } else {
      const long lo = std::max<long>(0, -off);
      const long hi = std::min<long>(static_cast<long>(w), static_cast<long>(w) - off);
      for (std::size_t m = 0; m < h; ++m) {
        const T* g = pg + m * row_stride;
        const T* s = px + m * row_stride;
        for (long l = lo; l < hi; ++l) {
          for (std::size_t ch = 0; ch < cc; ++ch) {
            gw[ch * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] +=
                static_cast<double>(g[static_cast<std::size_t>(l) * cc + ch]) *
                static_cast<double>(s[static_cast<std::size_t>(l + off) * cc + ch]);
          }
        }
      }
    }
  }
}

}  // namespace detail

// Depthwise 1D convolution along one spatial axis (stride 1, same padding).
template <typename T>
Tensor<T> line_conv(const Tensor<T>& x, const ArConvKernel<T>& k, Axis axis,
                    const ConvSpec& spec) {
  if (spec.stride != 1) throw ArgumentError("line_conv: stride must be 1");
  if (spec.padding != Padding::kSame) throw ArgumentError("line_conv: padding must be same");
  return detail::line_conv_impl(x, k.weight, k.bias, axis, spec.flip);
}

// --- ArConv: the reused 1D depthwise operator ---------------------------

// Applies the shared 1D kernel along `first` (columns by default), swaps
// rows and columns, applies the same kernel again, and swaps back. Bias,
// when present, is added once, in the second application. Equivalent to a
// depthwise 2D convolution with the rank-1 kernel outer(k, k).
template <typename T>
Tensor<T> arconv_forward(const Tensor<T>& x, const ArConvKernel<T>& k, const ConvSpec& spec,
                         Axis first = Axis::kCols) {
  if (spec.stride != 1) throw ArgumentError("arconv_forward: stride must be 1");
  if (spec.padding != Padding::kSame) throw ArgumentError("arconv_forward: padding must be same");
  Tensor<T> pass1 = detail::line_conv_impl(x, k.weight, Tensor<T>{}, first, spec.flip);
  Tensor<T> swapped = transpose_hw(pass1);
  Tensor<T> pass2 = detail::line_conv_impl(swapped, k.weight, k.bias, first, spec.flip);
  return transpose_hw(pass2);
}

// Rank-1 plane K[i,j] = k[i] * k[j]; the 2D kernel an ArConv realizes.
template <typename T>
Tensor<T> outer_kernel(const Tensor<T>& k) {
  if (k.rank() != 1) throw ShapeError("outer_kernel: expects a length-n vector");
  const std::size_t n = k.extent(0);
  std::vector<T> out(n * n);
  const T* p = k.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = p[i] * p[j];
  }
  return Tensor<T>::from_data({n, n}, std::move(out));
}

// --- depthwise 2D convolution --------------------------------------------

// Per-channel 2D convolution, kernels shaped C x n x n, same padding,
// stride 1 or 2. Stride 2 anchors output (m,l) at input (2m,2l), so the
// stride-2 result equals the stride-1 result subsampled at even indices.
template <typename T>
Tensor<T> depthwise_conv2d(const Tensor<T>& x, const Tensor<T>& k, const ConvSpec& spec) {
  if (x.rank() != 3) throw ShapeError("depthwise_conv2d: input must be HxWxC");
  if (k.rank() != 3 || k.extent(1) != k.extent(2)) {
    throw ShapeError("depthwise_conv2d: kernels must be Cxnxn");
  }
  if (k.extent(0) != x.extent(2)) {
    throw ShapeError("depthwise_conv2d: kernel count " + std::to_string(k.extent(0)) +
                     " != channels " + std::to_string(x.extent(2)));
  }
  const int n = static_cast<int>(k.extent(1));
  detail::check_kernel_size(n);
  if (spec.stride != 1 && spec.stride != 2) {
    throw ArgumentError("depthwise_conv2d: stride must be 1 or 2");
  }
  if (spec.padding != Padding::kSame) {
    throw ArgumentError("depthwise_conv2d: padding must be same");
  }
  const int center = n / 2;
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const std::size_t cc = x.extent(2);
  const std::size_t oh = detail::out_extent(x.extent(0), n, spec.stride, spec.padding);
  const std::size_t ow = detail::out_extent(x.extent(1), n, spec.stride, spec.padding);

  std::vector<T> out(oh * ow * cc, T{});
  const T* px = x.data();
  const T* pk = k.data();
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  if (spec.stride == 1) {
    // Per-tap accumulation: inner loops run over contiguous channel rows.
    std::vector<T> ktap(cc);
    for (int i = 0; i < n; ++i) {
      const long dr = detail::tap_offset(i, center, spec.flip);
      for (int j = 0; j < n; ++j) {
        const long dq = detail::tap_offset(j, center, spec.flip);
        for (std::size_t ch = 0; ch < cc; ++ch) {
          ktap[ch] = pk[ch * nn + static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                        static_cast<std::size_t>(j)];
        }
        const long mlo = std::max<long>(0, -dr);
        const long mhi = std::min<long>(h, h - dr);
        const long llo = std::max<long>(0, -dq);
        const long lhi = std::min<long>(w, w - dq);
        for (long m = mlo; m < mhi; ++m) {
          T* dst = out.data() + (static_cast<std::size_t>(m) * ow) * cc;
          const T* src = px + (static_cast<std::size_t>(m + dr) * static_cast<std::size_t>(w) +
                               static_cast<std::size_t>(dq)) *
                              cc;
          for (long l = llo; l < lhi; ++l) {
            T* d = dst + static_cast<std::size_t>(l) * cc;
            const T* s = src + static_cast<std::size_t>(l) * cc;
            for (std::size_t ch = 0; ch < cc; ++ch) d[ch] += ktap[ch] * s[ch];
          }
        }
      }
    }
  } else {
    for (std::size_t m = 0; m < oh; ++m) {
      for (std::size_t l = 0; l < ow; ++l) {
        T* d = out.data() + (m * ow + l) * cc;
        for (int i = 0; i < n; ++i) {
          const long r = static_cast<long>(m) * 2 + detail::tap_offset(i, center, spec.flip);
          if (r < 0 || r >= h) continue;
          for (int j = 0; j < n; ++j) {
            const long q = static_cast<long>(l) * 2 + detail::tap_offset(j, center, spec.flip);
            if (q < 0 || q >= w) continue;
            const T* s = px + (static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
                               static_cast<std::size_t>(q)) *
                              cc;
            const std::size_t tap = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                    static_cast<std::size_t>(j);
            for (std::size_t ch = 0; ch < cc; ++ch) d[ch] += pk[ch * nn + tap] * s[ch];
          }
        }
      }
    }
  }
  return Tensor<T>::from_data({oh, ow, cc}, std::move(out));
}

// --- backward passes ------------------------------------------------------

template <typename T>
struct PlaneConvGrads {
  Tensor<T> grad_input;
  Tensor<T> grad_kernel;
};

// Backward of conv2d_plane (stride 1, same padding).
template <typename T>
PlaneConvGrads<T> conv2d_plane_backward(const Tensor<T>& x, const Tensor<T>& k,
                                        const Tensor<T>& grad_out, const ConvSpec& spec) {
  if (spec.stride != 1 || spec.padding != Padding::kSame) {
    throw ArgumentError("conv2d_plane_backward: stride-1 same padding only");
  }
  if (!same_shape(x, grad_out)) {
    throw ShapeError("conv2d_plane_backward: grad_out shape mismatch");
  }
  ConvSpec adj = spec;
  adj.flip = !spec.flip;  // adjoint of convolution is correlation and vice versa
  Tensor<T> grad_input = conv2d_plane(grad_out, k, adj);

  const int n = static_cast<int>(k.extent(0));
  const int center = n / 2;
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const T* px = x.data();
  const T* pg = grad_out.data();
  std::vector<double> gk(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const long dr = detail::tap_offset(i, center, spec.flip);
    for (int j = 0; j < n; ++j) {
      const long dq = detail::tap_offset(j, center, spec.flip);
      double acc = 0.0;
      for (long m = std::max<long>(0, -dr); m < std::min<long>(h, h - dr); ++m) {
        for (long l = std::max<long>(0, -dq); l < std::min<long>(w, w - dq); ++l) {
          acc += static_cast<double>(pg[m * w + l]) *
                 static_cast<double>(px[(m + dr) * w + (l + dq)]);
        }
      }
      gk[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = acc;
    }
  }
  std::vector<T> gk_t(gk.size());
  for (std::size_t i = 0; i < gk.size(); ++i) gk_t[i] = static_cast<T>(gk[i]);
  return {std::move(grad_input),
          Tensor<T>::from_data({static_cast<std::size_t>(n), static_cast<std::size_t>(n)},
                               std::move(gk_t))};
}

// Backward of depthwise_conv2d (stride 1 or 2, same padding).
template <typename T>
PlaneConvGrads<T> depthwise_conv2d_backward(const Tensor<T>& x, const Tensor<T>& k,
                                            const Tensor<T>& grad_out, const ConvSpec& spec) {
  const int n = static_cast<int>(k.extent(1));
  const int center = n / 2;
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const std::size_t cc = x.extent(2);
  const std::size_t oh = detail::out_extent(x.extent(0), n, spec.stride, spec.padding);
  const std::size_t ow = detail::out_extent(x.extent(1), n, spec.stride, spec.padding);
  if (grad_out.rank() != 3 || grad_out.extent(0) != oh || grad_out.extent(1) != ow ||
      grad_out.extent(2) != cc) {
    throw ShapeError("depthwise_conv2d_backward: grad_out shape mismatch");
  }
  if (spec.padding != Padding::kSame) {
    throw ArgumentError("depthwise_conv2d_backward: same padding only");
  }

  const T* px = x.data();
  const T* pk = k.data();
  const T* pg = grad_out.data();
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  std::vector<T> gx(x.size(), T{});
  std::vector<double> gk(cc * nn, 0.0);

  for (std::size_t m = 0; m < oh; ++m) {
    for (std::size_t l = 0; l < ow; ++l) {
      const T* g = pg + (m * ow + l) * cc;
      for (int i = 0; i < n; ++i) {
        const long r = static_cast<long>(m) * spec.stride + detail::tap_offset(i, center, spec.flip);
        if (r < 0 || r >= h) continue;
        for (int j = 0; j < n; ++j) {
          const long q = static_cast<long>(l) * spec.stride + detail::tap_offset(j, center, spec.flip);
          if (q < 0 || q >= w) continue;
          const std::size_t xoff = (static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
                                    static_cast<std::size_t>(q)) *
                                   cc;
          const std::size_t tap = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(j);
          for (std::size_t ch = 0; ch < cc; ++ch) {
            gx[xoff + ch] += pk[ch * nn + tap] * g[ch];
            gk[ch * nn + tap] += static_cast<double>(px[xoff + ch]) * static_cast<double>(g[ch]);
          }
        }
      }
    }
  }
  std::vector<T> gk_t(gk.size());
  for (std::size_t i = 0; i < gk.size(); ++i) gk_t[i] = static_cast<T>(gk[i]);
  return {Tensor<T>::from_data(Shape(x.shape()), std::move(gx)),
          Tensor<T>::from_data(Shape(k.shape()), std::move(gk_t))};
}

template <typename T>
struct ArConvGrads {
  Tensor<T> grad_input;
  Tensor<T> grad_weight;
  Tensor<T> grad_bias;  // undefined when the kernel has no bias
};

// Backward of arconv_forward. The kernel is applied twice, so grad_weight
// carries two product-rule terms: one through the first application with
// the second held fixed, and one through the second with the first fixed.
// The first-pass output is recomputed rather than cached.
template <typename T>
ArConvGrads<T> arconv_backward(const Tensor<T>& x, const ArConvKernel<T>& k,
                               const Tensor<T>& grad_out, const ConvSpec& spec,
                               Axis first = Axis::kCols) {
  if (spec.stride != 1 || spec.padding != Padding::kSame) {
    throw ArgumentError("arconv_backward: stride-1 same padding only");
  }
  if (!same_shape(x, grad_out)) {
    throw ShapeError("arconv_backward: grad_out shape mismatch");
  }
  const std::size_t cc = x.rank() == 3 ? x.extent(2) : 1;
  std::size_t kc = 0, kn = 0;
  detail::line_kernel_dims(k.weight, cc, kc, kn);
  const int n = static_cast<int>(kn);

  Tensor<T> pass1 = detail::line_conv_impl(x, k.weight, Tensor<T>{}, first, spec.flip);
  Tensor<T> swapped = transpose_hw(pass1);

  Tensor<T> g_pass2 = transpose_hw(grad_out);
  Tensor<T> g_swapped = detail::line_conv_impl(g_pass2, k.weight, Tensor<T>{}, first, !spec.flip);
  Tensor<T> g_pass1 = transpose_hw(g_swapped);
  Tensor<T> grad_input = detail::line_conv_impl(g_pass1, k.weight, Tensor<T>{}, first, !spec.flip);

  std::vector<double> gw(cc * kn, 0.0);
  detail::line_conv_grad_weight(swapped, g_pass2, first, spec.flip, n, gw);  // via second pass
  detail::line_conv_grad_weight(x, g_pass1, first, spec.flip, n, gw);        // via first pass
  std::vector<T> gw_t(gw.size());
  for (std::size_t i = 0; i < gw.size(); ++i) gw_t[i] = static_cast<T>(gw[i]);
  Tensor<T> grad_weight = Tensor<T>::from_data(Shape(k.weight.shape()), std::move(gw_t));

  Tensor<T> grad_bias;
  if (k.has_bias()) {
    std::vector<double> gb(cc, 0.0);
    const T* pg = grad_out.data();
    const std::size_t positions = grad_out.size() / cc;
    for (std::size_t p = 0; p < positions; ++p) {
      for (std::size_t ch = 0; ch < cc; ++ch) gb[ch] += static_cast<double>(pg[p * cc + ch]);
    }
    std::vector<T> gb_t(cc);
    for (std::size_t ch = 0; ch < cc; ++ch) gb_t[ch] = static_cast<T>(gb[ch]);
    grad_bias = Tensor<T>::from_data({cc}, std::move(gb_t));
  }
  return {std::move(grad_input), std::move(grad_weight), std::move(grad_bias)};
}

}  // namespace arconv
