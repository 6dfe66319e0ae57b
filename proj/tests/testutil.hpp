#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "arconv/tensor.hpp"

namespace testutil {

// Central finite difference of a scalar loss wrt element `idx` of `x`.
// loss must be a pure function of the tensor passed in.
template <typename T>
double fd_grad(const arconv::Tensor<T>& x, std::size_t idx,
               const std::function<double(const arconv::Tensor<T>&)>& loss, double h = 1e-5) {
  std::vector<T> plus = x.to_vector();
  std::vector<T> minus = x.to_vector();
  plus[idx] = static_cast<T>(static_cast<double>(plus[idx]) + h);
  minus[idx] = static_cast<T>(static_cast<double>(minus[idx]) - h);
  const double lp = loss(arconv::Tensor<T>::from_data(arconv::Shape(x.shape()), std::move(plus)));
  const double lm = loss(arconv::Tensor<T>::from_data(arconv::Shape(x.shape()), std::move(minus)));
  return (lp - lm) / (2.0 * h);
}

// Relative error with an absolute floor so near-zero gradients don't blow up.
inline double rel_err(double got, double want, double floor = 1e-8) {
  const double denom = std::max({std::abs(got), std::abs(want), floor});
  return std::abs(got - want) / denom;
}

// Checks every element of `analytic` (gradient of `loss` wrt `x`) against
// central differences. Returns the worst relative error.
template <typename T>
double max_fd_rel_err(const arconv::Tensor<T>& x, const arconv::Tensor<T>& analytic,
                      const std::function<double(const arconv::Tensor<T>&)>& loss,
                      double h = 1e-5) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fd = fd_grad(x, i, loss, h);
    worst = std::max(worst, rel_err(static_cast<double>(analytic.flat(i)), fd));
  }
  return worst;
}

}  // namespace testutil
