#include "arconv/conv.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "arconv/fig6_case.hpp"
#include "arconv/tensor.hpp"
#include "testutil.hpp"

using arconv::ArConvKernel;
using arconv::Axis;
using arconv::ConvSpec;
using arconv::Padding;
using arconv::Rng;
using arconv::Tensor;

namespace {

ConvSpec flip_same() {
  ConvSpec s;
  s.flip = true;
  return s;
}

// Independent brute-force reference: quadruple loop, no shared code with
// conv2d_plane (explicit zero-padded lookup instead of tap ranges).
double padded_at(const Tensor<double>& x, long r, long q) {
  if (r < 0 || q < 0 || r >= static_cast<long>(x.extent(0)) ||
      q >= static_cast<long>(x.extent(1)))
    return 0.0;
  return x.at(static_cast<std::size_t>(r), static_cast<std::size_t>(q));
}

Tensor<double> brute_conv2d(const Tensor<double>& x, const Tensor<double>& k, bool flip) {
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const long n = static_cast<long>(k.extent(0));
  const long c = n / 2;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(h * w));
  for (long m = 0; m < h; ++m) {
    for (long l = 0; l < w; ++l) {
      double acc = 0.0;
      for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
          const long r = flip ? m - (i - c) : m + (i - c);
          const long q = flip ? l - (j - c) : l + (j - c);
          acc += k.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * padded_at(x, r, q);
        }
      }
      out.push_back(acc);
    }
  }
  return arconv::make_tensor<double>({x.extent(0), x.extent(1)}, out);
}

Tensor<double> delta_kernel(std::size_t n) {
  auto t = Tensor<double>::zeros({n, n});
  std::vector<double> v = t.to_vector();
  v[(n / 2) * n + n / 2] = 1.0;
  return arconv::make_tensor<double>({n, n}, v);
}

}  // namespace

TEST(Conv2dPlaneTest, Fig6ReferenceCells) {
  auto out = arconv::conv2d_plane(arconv::fig6::input(), arconv::fig6::kernel2d(), flip_same());
  EXPECT_NEAR(out.at(0, 0), 3.7516, 5e-4);
  EXPECT_NEAR(out.at(4, 4), 2.7572, 5e-4);
}

TEST(Conv2dPlaneTest, Fig6EveryCell) {
  auto out = arconv::conv2d_plane(arconv::fig6::input(), arconv::fig6::kernel2d(), flip_same());
  auto want = arconv::fig6::conv2d_output();
  EXPECT_LE(arconv::max_abs_diff(out, want), arconv::fig6::kCellTol);
}

TEST(Conv2dPlaneTest, DeltaKernelIdentity) {
  Rng rng(3);
  auto x = arconv::rand_uniform<double>(rng, {6, 7}, -1.0, 1.0);
  for (bool flip : {false, true}) {
    ConvSpec s;
    s.flip = flip;
    auto y = arconv::conv2d_plane(x, delta_kernel(3), s);
    EXPECT_LE(arconv::max_abs_diff(x, y), 0.0);
  }
}

TEST(Conv2dPlaneTest, MatchesBruteForceOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = arconv::rand_uniform<double>(rng, {9, 9}, -1.0, 1.0);
    auto k = arconv::rand_uniform<double>(rng, {3, 3}, -1.0, 1.0);
    for (bool flip : {false, true}) {
      ConvSpec s;
      s.flip = flip;
      auto got = arconv::conv2d_plane(x, k, s);
      auto want = brute_conv2d(x, k, flip);
      EXPECT_LE(arconv::max_abs_diff(got, want), 1e-12);
    }
  }
}

TEST(Conv2dPlaneTest, FlipDuality) {
  // conv with flip=true on K equals flip=false on the 180-degree rotation of K.
  Rng rng(21);
  auto x = arconv::rand_uniform<double>(rng, {8, 6}, -1.0, 1.0);
  auto k = arconv::rand_uniform<double>(rng, {3, 3}, -1.0, 1.0);
  std::vector<double> rot(9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) rot[(2 - i) * 3 + (2 - j)] = k.at(i, j);
  auto k_rot = arconv::make_tensor<double>({3, 3}, rot);

  ConvSpec flip = flip_same();
  ConvSpec corr;
  auto a = arconv::conv2d_plane(x, k, flip);
  auto b = arconv::conv2d_plane(x, k_rot, corr);
  EXPECT_LE(arconv::max_abs_diff(a, b), 1e-12);
}

TEST(Conv2dPlaneTest, EvenKernelRejected) {
  auto x = Tensor<double>::zeros({5, 5});
  auto k = Tensor<double>::zeros({2, 2});
  EXPECT_THROW(arconv::conv2d_plane(x, k, ConvSpec{}), arconv::ArgumentError);
}

TEST(LineConvTest, Fig6FirstApplyCells) {
  auto x = arconv::fig6::input();
  auto k = arconv::make_arconv_kernel(arconv::fig6::kernel1d());
  auto out = arconv::line_conv(x, k, Axis::kCols, flip_same());
  EXPECT_NEAR(out.at(0, 0), 1.6060, 5e-4);
  EXPECT_NEAR(out.at(0, 1), 3.2121, 5e-4);
  EXPECT_NEAR(out.at(1, 0), 1.7574, 5e-4);
  EXPECT_NEAR(out.at(4, 0), 0.8761, 5e-4);
  EXPECT_LE(arconv::max_abs_diff(out, arconv::fig6::first_apply()), arconv::fig6::kCellTol);
}

TEST(LineConvTest, DeltaKernelIdentity) {
  Rng rng(17);
  auto x = arconv::rand_uniform<double>(rng, {5, 4, 3}, -1.0, 1.0);
  auto w = arconv::make_tensor<double>({3, 3}, {0, 1, 0, 0, 1, 0, 0, 1, 0});
  auto k = arconv::make_arconv_kernel(w);
  for (Axis axis : {Axis::kCols, Axis::kRows}) {
    auto y = arconv::line_conv(x, k, axis, ConvSpec{});
    EXPECT_LE(arconv::max_abs_diff(x, y), 0.0);
  }
}

TEST(LineConvTest, RowsEqualsTransposedCols) {
  Rng rng(23);
  auto x = arconv::rand_uniform<double>(rng, {6, 4, 2}, -1.0, 1.0);
  auto w = arconv::rand_uniform<double>(rng, {2, 3}, -1.0, 1.0);
  auto k = arconv::make_arconv_kernel(w);
  ConvSpec s = flip_same();
  auto rows = arconv::line_conv(x, k, Axis::kRows, s);
  auto via_t = arconv::transpose_hw(arconv::line_conv(arconv::transpose_hw(x), k, Axis::kCols, s));
  EXPECT_LE(arconv::max_abs_diff(rows, via_t), 0.0);
}

TEST(LineConvTest, ChannelMismatchThrows) {
  auto x = Tensor<double>::zeros({4, 4, 3});
  auto k = arconv::make_arconv_kernel(Tensor<double>::zeros({2, 3}));
  EXPECT_THROW(arconv::line_conv(x, k, Axis::kCols, ConvSpec{}), arconv::ShapeError);
}

TEST(ArConvTest, Fig6FinalOutput) {
  auto x = arconv::fig6::input();
  auto k = arconv::make_arconv_kernel(arconv::fig6::kernel1d());
  auto out = arconv::arconv_forward(x, k, flip_same());
  EXPECT_NEAR(out.at(0, 0), 3.7518, 5e-4);
  EXPECT_LE(arconv::max_abs_diff(out, arconv::fig6::final_output()), arconv::fig6::kFinalCellTol);
  EXPECT_NEAR(arconv::mae(out, arconv::fig6::conv2d_output()), arconv::fig6::kMae,
              arconv::fig6::kMaeTol);
}

TEST(ArConvTest, DeltaKernelIdentity) {
  Rng rng(29);
  auto x = arconv::rand_uniform<double>(rng, {5, 6, 2}, -1.0, 1.0);
  auto w = arconv::make_tensor<double>({2, 3}, {0, 1, 0, 0, 1, 0});
  auto y = arconv::arconv_forward(x, arconv::make_arconv_kernel(w), ConvSpec{});
  EXPECT_LE(arconv::max_abs_diff(x, y), 0.0);
}

TEST(ArConvTest, SeparabilityOracle) {
  // arconv(x, k) must equal depthwise 2D convolution with outer(k, k).
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t h = 1 + rng.next_u64() % 12;
    const std::size_t w = 1 + rng.next_u64() % 10;
    const std::size_t c = 1 + rng.next_u64() % 3;
    auto x = arconv::rand_uniform<double>(rng, {h, w, c}, -1.0, 1.0);
    auto kw = arconv::rand_uniform<double>(rng, {c, 3}, -1.0, 1.0);
    for (bool flip : {false, true}) {
      ConvSpec s;
      s.flip = flip;
      auto got = arconv::arconv_forward(x, arconv::make_arconv_kernel(kw), s);

      std::vector<double> planes;
      planes.reserve(c * 9);
      for (std::size_t ch = 0; ch < c; ++ch) {
        std::vector<double> row(3);
        for (std::size_t i = 0; i < 3; ++i) row[i] = kw.at(ch, i);
        auto plane = arconv::outer_kernel(arconv::make_tensor<double>({3}, row));
        for (std::size_t i = 0; i < 9; ++i) planes.push_back(plane.flat(i));
      }
      auto k2d = arconv::make_tensor<double>({c, 3, 3}, planes);
      auto want = arconv::depthwise_conv2d(x, k2d, s);
      EXPECT_LE(arconv::max_abs_diff(got, want), 1e-12);
    }
  }
}

TEST(ArConvTest, OrderInvariance) {
  Rng rng(37);
  auto x = arconv::rand_uniform<double>(rng, {12, 10, 3}, -1.0, 1.0);
  auto kw = arconv::rand_uniform<double>(rng, {3, 3}, -1.0, 1.0);
  auto k = arconv::make_arconv_kernel(kw);
  ConvSpec s = flip_same();
  auto cols_first = arconv::arconv_forward(x, k, s, Axis::kCols);
  auto rows_first = arconv::arconv_forward(x, k, s, Axis::kRows);
  EXPECT_LE(arconv::max_abs_diff(cols_first, rows_first), 1e-12);
}

TEST(ArConvTest, LinearityInInput) {
  Rng rng(41);
  auto x1 = arconv::rand_uniform<double>(rng, {6, 5, 2}, -1.0, 1.0);
  auto x2 = arconv::rand_uniform<double>(rng, {6, 5, 2}, -1.0, 1.0);
  auto kw = arconv::rand_uniform<double>(rng, {2, 3}, -1.0, 1.0);
  auto k = arconv::make_arconv_kernel(kw);
  const double a = 0.7, b = -1.3;

  std::vector<double> mix(x1.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x1.flat(i) + b * x2.flat(i);
  auto xm = arconv::make_tensor<double>({6, 5, 2}, mix);

  auto ym = arconv::arconv_forward(xm, k, ConvSpec{});
  auto y1 = arconv::arconv_forward(x1, k, ConvSpec{});
  auto y2 = arconv::arconv_forward(x2, k, ConvSpec{});
  double worst = 0.0;
  for (std::size_t i = 0; i < ym.size(); ++i) {
    worst = std::max(worst, std::abs(ym.flat(i) - (a * y1.flat(i) + b * y2.flat(i))));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(OuterKernelTest, BasisAndOnes) {
  auto e0 = arconv::outer_kernel(arconv::make_tensor<double>({3}, {1, 0, 0}));
  EXPECT_EQ(e0.at(0, 0), 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < 9; ++i) sum += e0.flat(i);
  EXPECT_EQ(sum, 1.0);

  auto ones = arconv::outer_kernel(arconv::make_tensor<double>({3}, {1, 1, 1}));
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(ones.flat(i), 1.0);
}

TEST(OuterKernelTest, Fig6KernelProducts) {
  auto k = arconv::outer_kernel(arconv::fig6::kernel1d());
  EXPECT_DOUBLE_EQ(k.at(1, 2), 0.8761 * 0.8813);
  EXPECT_DOUBLE_EQ(k.at(2, 1), 0.8761 * 0.8813);
}

TEST(DepthwiseTest, Stride2Shapes) {
  auto x = Tensor<double>::zeros({56, 56, 24});
  auto k = Tensor<double>::zeros({24, 3, 3});
  ConvSpec s;
  s.stride = 2;
  auto y = arconv::depthwise_conv2d(x, k, s);
  EXPECT_EQ(y.shape(), (arconv::Shape{28, 28, 24}));

  auto odd = arconv::depthwise_conv2d(Tensor<double>::zeros({7, 9, 2}),
                                      Tensor<double>::zeros({2, 3, 3}), s);
  EXPECT_EQ(odd.shape(), (arconv::Shape{4, 5, 2}));
}

TEST(DepthwiseTest, DeltaKernelsIdentity) {
  Rng rng(43);
  auto x = arconv::rand_uniform<double>(rng, {6, 6, 3}, -1.0, 1.0);
  std::vector<double> k(3 * 9, 0.0);
  for (std::size_t ch = 0; ch < 3; ++ch) k[ch * 9 + 4] = 1.0;
  auto kd = arconv::make_tensor<double>({3, 3, 3}, k);
  auto y = arconv::depthwise_conv2d(x, kd, ConvSpec{});
  EXPECT_LE(arconv::max_abs_diff(x, y), 0.0);
}

TEST(DepthwiseTest, Stride2EqualsSubsampledStride1) {
  Rng rng(47);
  auto x = arconv::rand_uniform<double>(rng, {8, 8, 2}, -1.0, 1.0);
  auto k = arconv::rand_uniform<double>(rng, {2, 3, 3}, -1.0, 1.0);
  ConvSpec s1;
  ConvSpec s2;
  s2.stride = 2;
  auto full = arconv::depthwise_conv2d(x, k, s1);
  auto half = arconv::depthwise_conv2d(x, k, s2);
  ASSERT_EQ(half.shape(), (arconv::Shape{4, 4, 2}));
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t l = 0; l < 4; ++l)
      for (std::size_t ch = 0; ch < 2; ++ch)
        EXPECT_EQ(half.at(m, l, ch), full.at(2 * m, 2 * l, ch));
}

TEST(DepthwiseTest, ChannelMismatchThrows) {
  EXPECT_THROW(arconv::depthwise_conv2d(Tensor<double>::zeros({4, 4, 3}),
                                        Tensor<double>::zeros({2, 3, 3}), ConvSpec{}),
               arconv::ShapeError);
}

// --- backward passes ------------------------------------------------------

TEST(ConvBackwardTest, ZeroGradGivesZeros) {
  Rng rng(53);
  auto x = arconv::rand_uniform<double>(rng, {5, 5}, -1.0, 1.0);
  auto k = arconv::rand_uniform<double>(rng, {3, 3}, -1.0, 1.0);
  auto g = Tensor<double>::zeros({5, 5});
  auto grads = arconv::conv2d_plane_backward(x, k, g, ConvSpec{});
  EXPECT_LE(arconv::max_abs_diff(grads.grad_input, g), 0.0);
  EXPECT_LE(arconv::max_abs_diff(grads.grad_kernel, Tensor<double>::zeros({3, 3})), 0.0);
}

TEST(ConvBackwardTest, DeltaKernelPassesGradThrough) {
  Rng rng(59);
  auto x = arconv::rand_uniform<double>(rng, {6, 6}, -1.0, 1.0);
  auto g = arconv::rand_uniform<double>(rng, {6, 6}, -1.0, 1.0);
  auto grads = arconv::conv2d_plane_backward(x, delta_kernel(3), g, ConvSpec{});
  EXPECT_LE(arconv::max_abs_diff(grads.grad_input, g), 0.0);
}

namespace {

// Scalar probe loss: sum(grad_probe * op(x)). Its gradients equal the
// backward pass outputs, which makes finite differences easy to state.
double probe_loss(const Tensor<double>& y, const Tensor<double>& probe) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += y.flat(i) * probe.flat(i);
  return acc;
}

}  // namespace

TEST(ConvBackwardTest, FiniteDifferenceAgreement) {
  Rng rng(61);
  auto x = arconv::rand_uniform<double>(rng, {7, 7}, -1.0, 1.0);
  auto k = arconv::rand_uniform<double>(rng, {3, 3}, -1.0, 1.0);
  auto probe = arconv::rand_uniform<double>(rng, {7, 7}, -1.0, 1.0);
  for (bool flip : {false, true}) {
    ConvSpec s;
    s.flip = flip;
    auto grads = arconv::conv2d_plane_backward(x, k, probe, s);
    const double ex = testutil::max_fd_rel_err<double>(
        x, grads.grad_input,
        [&](const Tensor<double>& xv) { return probe_loss(arconv::conv2d_plane(xv, k, s), probe); });
    const double ek = testutil::max_fd_rel_err<double>(
        k, grads.grad_kernel,
        [&](const Tensor<double>& kv) { return probe_loss(arconv::conv2d_plane(x, kv, s), probe); });
    EXPECT_LE(ex, 1e-4);
    EXPECT_LE(ek, 1e-4);
  }
}

TEST(ConvBackwardTest, DepthwiseFiniteDifferenceBothStrides) {
  Rng rng(67);
  auto x = arconv::rand_uniform<double>(rng, {6, 5, 2}, -1.0, 1.0);
  auto k = arconv::rand_uniform<double>(rng, {2, 3, 3}, -1.0, 1.0);
  for (int stride : {1, 2}) {
    ConvSpec s;
    s.stride = stride;
    auto y = arconv::depthwise_conv2d(x, k, s);
    auto probe = arconv::rand_uniform<double>(rng, arconv::Shape(y.shape()), -1.0, 1.0);
    auto grads = arconv::depthwise_conv2d_backward(x, k, probe, s);
    const double ex = testutil::max_fd_rel_err<double>(
        x, grads.grad_input, [&](const Tensor<double>& xv) {
          return probe_loss(arconv::depthwise_conv2d(xv, k, s), probe);
        });
    const double ek = testutil::max_fd_rel_err<double>(
        k, grads.grad_kernel, [&](const Tensor<double>& kv) {
          return probe_loss(arconv::depthwise_conv2d(x, kv, s), probe);
        });
    EXPECT_LE(ex, 1e-4);
    EXPECT_LE(ek, 1e-4);
  }
}

TEST(ArConvBackwardTest, ZeroGradAndBiasSum) {
  Rng rng(71);
  auto x = arconv::rand_uniform<double>(rng, {6, 6, 2}, -1.0, 1.0);
  auto w = arconv::rand_uniform<double>(rng, {2, 3}, -1.0, 1.0);
  auto b = arconv::rand_uniform<double>(rng, {2}, -0.1, 0.1);
  auto k = arconv::make_arconv_kernel(w, b);

  auto zeros = Tensor<double>::zeros({6, 6, 2});
  auto g0 = arconv::arconv_backward(x, k, zeros, ConvSpec{});
  EXPECT_LE(arconv::max_abs_diff(g0.grad_input, zeros), 0.0);
  EXPECT_LE(arconv::max_abs_diff(g0.grad_weight, Tensor<double>::zeros({2, 3})), 0.0);

  auto g = arconv::rand_uniform<double>(rng, {6, 6, 2}, -1.0, 1.0);
  auto grads = arconv::arconv_backward(x, k, g, ConvSpec{});
  for (std::size_t ch = 0; ch < 2; ++ch) {
    double want = 0.0;
    for (std::size_t m = 0; m < 6; ++m)
      for (std::size_t l = 0; l < 6; ++l) want += g.at(m, l, ch);
    EXPECT_NEAR(grads.grad_bias.flat(ch), want, 1e-12);
  }
}

TEST(ArConvBackwardTest, FiniteDifferenceAgreement) {
  Rng rng(73);
  auto x = arconv::rand_uniform<double>(rng, {6, 6, 2}, -1.0, 1.0);
  auto w = arconv::rand_uniform<double>(rng, {2, 3}, -1.0, 1.0);
  auto b = arconv::rand_uniform<double>(rng, {2}, -0.2, 0.2);
  auto probe = arconv::rand_uniform<double>(rng, {6, 6, 2}, -1.0, 1.0);
  for (bool flip : {false, true}) {
    ConvSpec s;
    s.flip = flip;
    auto kern = arconv::make_arconv_kernel(w, b);
    auto grads = arconv::arconv_backward(x, kern, probe, s);

    const double ex = testutil::max_fd_rel_err<double>(
        x, grads.grad_input, [&](const Tensor<double>& xv) {
          return probe_loss(arconv::arconv_forward(xv, kern, s), probe);
        });
    const double ew = testutil::max_fd_rel_err<double>(
        w, grads.grad_weight, [&](const Tensor<double>& wv) {
          auto kv = arconv::make_arconv_kernel(wv, b);
          return probe_loss(arconv::arconv_forward(x, kv, s), probe);
        });
    const double eb = testutil::max_fd_rel_err<double>(
        b, grads.grad_bias, [&](const Tensor<double>& bv) {
          auto kv = arconv::make_arconv_kernel(w, bv);
          return probe_loss(arconv::arconv_forward(x, kv, s), probe);
        });
    EXPECT_LE(ex, 1e-4);
    EXPECT_LE(ew, 1e-4);
    EXPECT_LE(eb, 1e-4);
  }
}

TEST(ParameterEconomyTest, SpatialWeightsPerChannel) {
  // n weights per channel for ArConv vs n^2 for 2D depthwise: 2/3 saved at n=3.
  const int n = 3;
  EXPECT_GT(1.0 - static_cast<double>(n) / static_cast<double>(n * n), 0.66);
}
