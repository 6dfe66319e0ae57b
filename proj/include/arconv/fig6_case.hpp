#pragma once

#include "arconv/tensor.hpp"

// Canonical data for the fig6 experiment: a 5x5 integer input, a reference
// 3x3 kernel with its flipped-convolution output, and the 1D replication
// kernel with its first-apply and final ArConv outputs. All values carry
// four decimals; recomputed matrices are expected to agree per cell within
// kCellTol (2D panel, first apply) resp. kFinalCellTol (final panel, whose
// reference values were evidently produced from an unrounded kernel), and
// the final-vs-2D mean absolute error within kMaeTol of kMae.
namespace arconv::fig6 {

inline constexpr double kMae = 0.3678;
inline constexpr double kCellTol = 5e-4;
inline constexpr double kFinalCellTol = 2e-3;
inline constexpr double kMaeTol = 1e-3;

template <typename T = double>
Tensor<T> input() {
  return make_tensor<T>({5, 5}, {1, 2, 1, 1, 2,    //
                                 1, 2, 2, 1, 2,    //
                                 0, 1, 0, 1, 1,    //
                                 0, 0, 2, 0, 0,    //
                                 1, 2, 1, 2, 2});
}

template <typename T = double>
Tensor<T> kernel2d() {
  return make_tensor<T>({3, 3}, {static_cast<T>(0.3225), static_cast<T>(0.4578), static_cast<T>(0.6938),
                                 static_cast<T>(0.9707), static_cast<T>(0.7073), static_cast<T>(0.6712),
                                 static_cast<T>(0.7724), static_cast<T>(0.6559), static_cast<T>(0.8607)});
}

template <typename T = double>
Tensor<T> kernel1d() {
  return make_tensor<T>({3}, {static_cast<T>(0.7299), static_cast<T>(0.8761), static_cast<T>(0.8813)});
}

// Reference output of kernel2d applied as flipped convolution, same padding.
template <typename T = double>
Tensor<T> conv2d_output() {
  return make_tensor<T>(
      {5, 5},
      {static_cast<T>(3.7516), static_cast<T>(5.3113), static_cast<T>(5.6466), static_cast<T>(5.8106), static_cast<T>(3.6956),
       static_cast<T>(5.1721), static_cast<T>(7.4303), static_cast<T>(7.8942), static_cast<T>(7.8333), static_cast<T>(5.4103),
       static_cast<T>(3.1715), static_cast<T>(5.0698), static_cast<T>(6.3636), static_cast<T>(6.9881), static_cast<T>(3.5511),
       static_cast<T>(1.8753), static_cast<T>(4.5294), static_cast<T>(5.5385), static_cast<T>(5.0256), static_cast<T>(3.8201),
       static_cast<T>(2.6487), static_cast<T>(4.6016), static_cast<T>(5.3031), static_cast<T>(5.7488), static_cast<T>(2.7572)});
}

// Column-wise first application of kernel1d (flipped, same padding).
template <typename T = double>
Tensor<T> first_apply() {
  return make_tensor<T>(
      {5, 5},
      {static_cast<T>(1.6060), static_cast<T>(3.2121), static_cast<T>(2.3360), static_cast<T>(1.6060), static_cast<T>(3.2121),
       static_cast<T>(1.7574), static_cast<T>(4.2448), static_cast<T>(2.6335), static_cast<T>(2.4873), static_cast<T>(4.2448),
       static_cast<T>(0.8813), static_cast<T>(2.6387), static_cast<T>(3.2225), static_cast<T>(1.7574), static_cast<T>(2.6387),
       static_cast<T>(0.7299), static_cast<T>(2.3412), static_cast<T>(2.4822), static_cast<T>(2.3412), static_cast<T>(2.3412),
       static_cast<T>(0.8761), static_cast<T>(1.7522), static_cast<T>(2.6387), static_cast<T>(1.7522), static_cast<T>(1.7522)});
}

// Full ArConv output of kernel1d (both passes).
template <typename T = double>
Tensor<T> final_output() {
  return make_tensor<T>(
      {5, 5},
      {static_cast<T>(3.7518), static_cast<T>(5.9349), static_cast<T>(6.0499), static_cast<T>(5.8106), static_cast<T>(4.2297),
       static_cast<T>(4.6382), static_cast<T>(7.1902), static_cast<T>(7.8640), static_cast<T>(7.5988), static_cast<T>(5.9111),
       static_cast<T>(2.6983), static_cast<T>(5.4409), static_cast<T>(6.4317), static_cast<T>(6.3060), static_cast<T>(3.8607),
       static_cast<T>(2.3485), static_cast<T>(4.5064), static_cast<T>(5.9478), static_cast<T>(5.9478), static_cast<T>(4.1145),
       static_cast<T>(2.0466), static_cast<T>(4.2335), static_cast<T>(5.1352), static_cast<T>(5.1398), static_cast<T>(3.0794)});
}

}  // namespace arconv::fig6
