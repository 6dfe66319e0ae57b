#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "arconv/conv.hpp"
#include "arconv/errors.hpp"
#include "arconv/fig6_case.hpp"
#include "arconv/rng.hpp"
#include "arconv/tensor.hpp"

// Kernel-weight estimation: given an input plane and the output some
// convolution produced from it, recover kernel weights that replicate the
// map. The 2D estimator solves a linear least-squares system; the 1D
// (ArConv) estimator runs restarted first-order descent on the squared
// output error. Both use the flipped-kernel orientation throughout, the
// one the fig6 reference data requires.
namespace arconv {

struct GdOptions {
  double lr = 1e-2;
  int max_iters = 5000;
  double tol_mae = 1e-7;  // stop once the fit reproduces the target this well
  int restarts = 8;
  double init_lo = -1.0;  // kernel init distribution: uniform[init_lo, init_hi)
  double init_hi = 1.0;
};

inline void validate(const GdOptions& o) {
  if (!(o.lr > 0) || o.max_iters <= 0 || !(o.tol_mae > 0) || o.restarts <= 0 ||
      !(o.init_lo < o.init_hi)) {
    throw ArgumentError("GdOptions: all options must be positive and init_lo < init_hi");
  }
}

enum class TargetKind { kConv2d, kArConv };
enum class FitterKind { kConv2dLs, kArConvGd };

inline const char* to_string(TargetKind k) {
  return k == TargetKind::kConv2d ? "conv2d" : "arconv";
}
inline const char* to_string(FitterKind k) {
  return k == FitterKind::kConv2dLs ? "conv2d_ls" : "arconv_gd";
}

// One estimation trial of a sweep.
struct FitReport {
  std::size_t input_size = 0;
  int trial = 0;
  TargetKind target = TargetKind::kConv2d;
  FitterKind fitter = FitterKind::kConv2dLs;
  std::vector<double> kernel;  // fitted weights, row-major
  double mae = 0.0;            // output MAE on the fitting input
  long iters = 0;
  std::uint64_t seed = 0;
  bool used_ridge = false;
  bool ok = true;
};

namespace detail {

inline ConvSpec fit_spec() {
  ConvSpec s;
  s.flip = true;
  return s;
}

// Gaussian elimination with partial pivoting; a is n x n row-major and is
// destroyed. Returns false when a pivot collapses.
inline bool solve_inplace(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double tiny = std::max(scale, 1.0) * 1e-12;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (std::abs(a[pivot * n + col]) < tiny) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[pivot * n + j], a[col * n + j]);
      std::swap(b[pivot], b[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double acc = b[col];
    for (std::size_t j = col + 1; j < n; ++j) acc -= a[col * n + j] * b[j];
    b[col] = acc / a[col * n + col];
  }
  return true;
}

}  // namespace detail

template <typename T>
struct LsFit {
  Tensor<T> kernel;  // n x n
  bool used_ridge = false;
};

// Least-squares estimate of the n x n kernel mapping x to y under
// flipped-kernel, stride-1, same-padding convolution. The design matrix
// columns are the n^2 shifted, zero-padded copies of x; the normal
// equations are solved directly, with a ridge term of 1e-10 as fallback
// when the system is rank deficient.
template <typename T>
LsFit<T> fit_conv2d_ls(const Tensor<T>& x, const Tensor<T>& y, int n) {
  if (x.rank() != 2 || !same_shape(x, y)) {
    throw ShapeError("fit_conv2d_ls: x and y must be equal HxW planes");
  }
  detail::check_kernel_size(n);
  const std::size_t taps = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (x.size() < taps) {
    throw ArgumentError("fit_conv2d_ls: need H*W >= n^2 observations");
  }
  const long h = static_cast<long>(x.extent(0));
  const long w = static_cast<long>(x.extent(1));
  const int center = n / 2;

  // Materialize the shifted copies once; the problem sizes here are tiny.
  std::vector<std::vector<double>> cols(taps, std::vector<double>(x.size(), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto& col = cols[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(j)];
      for (long m = 0; m < h; ++m) {
        const long r = m + detail::tap_offset(i, center, /*flip=*/true);
        if (r < 0 || r >= h) continue;
        for (long l = 0; l < w; ++l) {
          const long q = l + detail::tap_offset(j, center, /*flip=*/true);
          if (q < 0 || q >= w) continue;
          col[static_cast<std::size_t>(m * w + l)] =
              static_cast<double>(x.data()[r * w + q]);
        }
      }
    }
  }

  std::vector<double> gram(taps * taps, 0.0);
  std::vector<double> rhs(taps, 0.0);
  for (std::size_t t1 = 0; t1 < taps; ++t1) {
    for (std::size_t t2 = t1; t2 < taps; ++t2) {
      double acc = 0.0;
      for (std::size_t p = 0; p < x.size(); ++p) acc += cols[t1][p] * cols[t2][p];
      gram[t1 * taps + t2] = acc;
      gram[t2 * taps + t1] = acc;
    }
    double acc = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
      acc += cols[t1][p] * static_cast<double>(y.data()[p]);
    }
    rhs[t1] = acc;
  }

  std::vector<double> a = gram;
  std::vector<double> b = rhs;
  bool used_ridge = false;
  if (!detail::solve_inplace(a, b, taps)) {
    a = gram;
    b = rhs;
    for (std::size_t t = 0; t < taps; ++t) a[t * taps + t] += 1e-10;
    used_ridge = true;
    if (!detail::solve_inplace(a, b, taps)) {
      throw NumericError("fit_conv2d_ls: normal equations unsolvable even with ridge");
    }
  }
  std::vector<T> kv(taps);
  for (std::size_t t = 0; t < taps; ++t) kv[t] = static_cast<T>(b[t]);
  return {Tensor<T>::from_data({static_cast<std::size_t>(n), static_cast<std::size_t>(n)},
                               std::move(kv)),
          used_ridge};
}

template <typename T>
struct GdFit {
  Tensor<T> kernel;  // length n
  double mae = 0.0;
  long iters = 0;
  bool ok = true;
};

namespace detail {

template <typename T>
double arconv_fit_mse(const Tensor<T>& x, const Tensor<T>& y, const std::vector<double>& k) {
  std::vector<T> kt(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) kt[i] = static_cast<T>(k[i]);
  auto kernel = make_arconv_kernel(Tensor<T>::from_data({k.size()}, std::move(kt)));
  Tensor<T> yhat = arconv_forward(x, kernel, fit_spec());
  double loss = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    const double d = static_cast<double>(yhat.flat(p)) - static_cast<double>(y.flat(p));
    loss += d * d;
  }
  return loss / static_cast<double>(x.size());
}

}  // namespace detail

// Restarted Adam descent on the mean-squared output error of an ArConv
// kernel, followed by a backtracking gradient-descent polish from the best
// iterate (Adam's normalized steps cannot settle into very flat basins).
// MSE is optimized (smooth gradients); MAE is what gets reported. The
// objective is quadratic per tap product but non-convex overall, so
// restarts guard against bad basins.
template <typename T>
GdFit<T> fit_arconv_gd(const Tensor<T>& x, const Tensor<T>& y, int n, const GdOptions& opts,
                       Rng rng) {
  if (x.rank() != 2 || !same_shape(x, y)) {
    throw ShapeError("fit_arconv_gd: x and y must be equal HxW planes");
  }
  detail::check_kernel_size(n);
  validate(opts);
  const ConvSpec spec = detail::fit_spec();
  const std::size_t un = static_cast<std::size_t>(n);
  const double inv_count = 1.0 / static_cast<double>(x.size());

  GdFit<T> best;
  best.ok = false;
  double best_loss = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.restarts; ++restart) {
    Rng r = rng.split(static_cast<std::uint64_t>(restart));
    std::vector<double> k(un);
    for (auto& v : k) v = r.uniform(opts.init_lo, opts.init_hi);

    std::vector<double> m(un, 0.0), v2(un, 0.0);
    double local_best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> local_best_k = k;
    long local_best_iter = 0;
    double lr_eff = opts.lr;
    int stalled = 0;
    bool aborted = false;
    long iter = 0;

    for (iter = 1; iter <= opts.max_iters; ++iter) {
      std::vector<T> kt(un);
      for (std::size_t i = 0; i < un; ++i) kt[i] = static_cast<T>(k[i]);
      auto kernel = make_arconv_kernel(Tensor<T>::from_data({un}, std::move(kt)));
      Tensor<T> yhat = arconv_forward(x, kernel, spec);

      double loss = 0.0;
      std::vector<T> diff(x.size());
      for (std::size_t p = 0; p < x.size(); ++p) {
        const double d = static_cast<double>(yhat.flat(p)) - static_cast<double>(y.flat(p));
        loss += d * d;
        diff[p] = static_cast<T>(2.0 * d * inv_count);
      }
      loss *= inv_count;
      if (!std::isfinite(loss)) {
        aborted = true;
        break;
      }
      if (loss < local_best_loss * (1.0 - 1e-12)) {
        local_best_loss = loss;
        local_best_k = k;
        local_best_iter = iter;
        stalled = 0;
      } else if (++stalled >= 100) {
        // No real progress for a while: halve the step and eventually stop.
        lr_eff *= 0.5;
        stalled = 0;
        if (lr_eff < opts.lr * 1e-3) break;
      }
      if (std::sqrt(loss) <= opts.tol_mae) break;  // RMS bounds MAE from above

      auto grad_out = Tensor<T>::from_data(Shape(x.shape()), std::move(diff));
      auto grads = arconv_backward(x, kernel, grad_out, spec);
      const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(iter));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(iter));
      for (std::size_t i = 0; i < un; ++i) {
        const double g = static_cast<double>(grads.grad_weight.flat(i));
        m[i] = b1 * m[i] + (1.0 - b1) * g;
        v2[i] = b2 * v2[i] + (1.0 - b2) * g * g;
        k[i] -= lr_eff * (m[i] / c1) / (std::sqrt(v2[i] / c2) + eps);
      }
    }
    if (aborted) continue;

    std::vector<T> kt(un);
    for (std::size_t i = 0; i < un; ++i) kt[i] = static_cast<T>(local_best_k[i]);
    auto kernel_t = Tensor<T>::from_data({un}, std::move(kt));
    const double fit_mae = mae(arconv_forward(x, make_arconv_kernel(kernel_t), spec), y);
    if (!best.ok || local_best_loss < best_loss) {
      best_loss = local_best_loss;
      best.kernel = kernel_t;
      best.mae = fit_mae;
      best.iters = local_best_iter;
      best.ok = true;
    }
    if (best.ok && best.mae <= opts.tol_mae) break;
  }
  return best;
}

// --- experiment harnesses -------------------------------------------------

struct Fig6Report {
  Tensor<double> conv_out;     // reference 2D convolution output
  Tensor<double> first_apply;  // first ArConv pass
  Tensor<double> final_out;    // full ArConv output
  double mae_final_vs_conv = 0.0;
  std::vector<std::string> cell_failures;
  bool pass = false;
};

namespace detail {

inline void collect_cell_failures(const Tensor<double>& got, const Tensor<double>& want,
                                  double tol, const char* tag,
                                  std::vector<std::string>& failures) {
  for (std::size_t i = 0; i < got.extent(0); ++i) {
    for (std::size_t j = 0; j < got.extent(1); ++j) {
      const double d = std::abs(got.at(i, j) - want.at(i, j));
      if (d > tol) {
        failures.push_back(std::string(tag) + "[" + std::to_string(i) + "," +
                           std::to_string(j) + "] off by " + std::to_string(d));
      }
    }
  }
}

}  // namespace detail

// Recomputes the worked single-channel example from its hardcoded matrices
// and checks every cell. Always runs in 64-bit.
inline Fig6Report run_fig6() {
  const ConvSpec spec = detail::fit_spec();
  Fig6Report rep;
  rep.conv_out = conv2d_plane(fig6::input(), fig6::kernel2d(), spec);
  auto kernel = make_arconv_kernel(fig6::kernel1d());
  rep.first_apply = line_conv(fig6::input(), kernel, Axis::kCols, spec);
  rep.final_out = arconv_forward(fig6::input(), kernel, spec);
  rep.mae_final_vs_conv = mae(rep.final_out, rep.conv_out);

  detail::collect_cell_failures(rep.conv_out, fig6::conv2d_output(), fig6::kCellTol, "conv2d",
                                rep.cell_failures);
  detail::collect_cell_failures(rep.first_apply, fig6::first_apply(), fig6::kCellTol,
                                "first_apply", rep.cell_failures);
  detail::collect_cell_failures(rep.final_out, fig6::final_output(), fig6::kFinalCellTol,
                                "final", rep.cell_failures);
  if (std::abs(rep.mae_final_vs_conv - fig6::kMae) > fig6::kMaeTol) {
    rep.cell_failures.push_back("mae " + std::to_string(rep.mae_final_vs_conv) +
                                " not within tolerance of " + std::to_string(fig6::kMae));
  }
  rep.pass = rep.cell_failures.empty();
  return rep;
}

namespace detail {

template <typename T>
double fit_output_mae(const Tensor<T>& x, const Tensor<T>& y, const Tensor<T>& kernel2d) {
  return mae(conv2d_plane(x, kernel2d, fit_spec()), y);
}

}  // namespace detail

// Estimation sweep against random 2D-convolution targets: per input size
// one fixed random input, `trials` random 3x3 kernels, both fitters.
inline std::vector<FitReport> run_fig7(const std::vector<std::size_t>& sizes, int trials,
                                       std::uint64_t seed, const GdOptions& opts) {
  validate(opts);
  for (std::size_t s : sizes) {
    if (s < 3) throw ArgumentError("run_fig7: sizes must be >= 3");
  }
  Rng base(seed);
  std::vector<FitReport> reports;
  reports.reserve(sizes.size() * static_cast<std::size_t>(trials) * 2);
  for (std::size_t s : sizes) {
    Rng size_rng = base.split(s);
    Rng input_rng = size_rng.split(0);
    const auto x = rand_uniform<double>(input_rng, {s, s}, 0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
      Rng trial_rng = size_rng.split(static_cast<std::uint64_t>(t) + 1);
      const auto target_kernel = rand_uniform<double>(trial_rng, {3, 3}, 0.0, 1.0);
      const auto y = conv2d_plane(x, target_kernel, detail::fit_spec());

      auto ls = fit_conv2d_ls(x, y, 3);
      FitReport r2;
      r2.input_size = s;
      r2.trial = t;
      r2.target = TargetKind::kConv2d;
      r2.fitter = FitterKind::kConv2dLs;
      r2.kernel = ls.kernel.to_vector();
      r2.mae = detail::fit_output_mae(x, y, ls.kernel);
      r2.iters = 0;
      r2.seed = trial_rng.seed();
      r2.used_ridge = ls.used_ridge;
      reports.push_back(std::move(r2));

      auto gd = fit_arconv_gd(x, y, 3, opts, trial_rng.split(1));
      FitReport r1;
      r1.input_size = s;
      r1.trial = t;
      r1.target = TargetKind::kConv2d;
      r1.fitter = FitterKind::kArConvGd;
      r1.kernel = gd.ok ? gd.kernel.to_vector() : std::vector<double>{};
      r1.mae = gd.ok ? gd.mae : std::numeric_limits<double>::quiet_NaN();
      r1.iters = gd.iters;
      r1.seed = trial_rng.seed();
      r1.ok = gd.ok;
      reports.push_back(std::move(r1));
    }
  }
  return reports;
}

// Estimation sweep against ArConv targets: reference kernels are random 1D
// vectors, targets produced by arconv_forward, fitted by both fitters.
// Because outer(k, k) lies inside the 2D hypothesis class, the 2D
// least-squares fit of an ArConv target is expected to be near-exact.
inline std::vector<FitReport> run_fig8(const std::vector<std::size_t>& sizes, int trials,
                                       std::uint64_t seed, const GdOptions& opts) {
  validate(opts);
  for (std::size_t s : sizes) {
    if (s < 3) throw ArgumentError("run_fig8: sizes must be >= 3");
  }
  Rng base(seed);
  std::vector<FitReport> reports;
  reports.reserve(sizes.size() * static_cast<std::size_t>(trials) * 2);
  for (std::size_t s : sizes) {
    Rng size_rng = base.split(s);
    Rng input_rng = size_rng.split(0);
    const auto x = rand_uniform<double>(input_rng, {s, s}, 0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
      Rng trial_rng = size_rng.split(static_cast<std::uint64_t>(t) + 1);
      const auto target_1d = rand_uniform<double>(trial_rng, {3}, 0.0, 1.0);
      const auto y = arconv_forward(x, make_arconv_kernel(target_1d), detail::fit_spec());

      auto gd = fit_arconv_gd(x, y, 3, opts, trial_rng.split(1));
      FitReport r1;
      r1.input_size = s;
      r1.trial = t;
      r1.target = TargetKind::kArConv;
      r1.fitter = FitterKind::kArConvGd;
      r1.kernel = gd.ok ? gd.kernel.to_vector() : std::vector<double>{};
      r1.mae = gd.ok ? gd.mae : std::numeric_limits<double>::quiet_NaN();
      r1.iters = gd.iters;
      r1.seed = trial_rng.seed();
      r1.ok = gd.ok;
      reports.push_back(std::move(r1));

      auto ls = fit_conv2d_ls(x, y, 3);
      FitReport r2;
      r2.input_size = s;
      r2.trial = t;
      r2.target = TargetKind::kArConv;
      r2.fitter = FitterKind::kConv2dLs;
      r2.kernel = ls.kernel.to_vector();
      r2.mae = detail::fit_output_mae(x, y, ls.kernel);
      r2.iters = 0;
      r2.seed = trial_rng.seed();
      r2.used_ridge = ls.used_ridge;
      reports.push_back(std::move(r2));
    }
  }
  return reports;
}

// Mean output MAE per (size, fitter) pair, in first-appearance order.
struct MaeSummaryRow {
  std::size_t input_size = 0;
  FitterKind fitter = FitterKind::kConv2dLs;
  double mean_mae = 0.0;
  int trials = 0;
};

inline std::vector<MaeSummaryRow> summarize_mean_mae(const std::vector<FitReport>& reports) {
  std::vector<MaeSummaryRow> rows;
  for (const auto& r : reports) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const MaeSummaryRow& row) {
      return row.input_size == r.input_size && row.fitter == r.fitter;
    });
    if (it == rows.end()) {
      rows.push_back({r.input_size, r.fitter, 0.0, 0});
      it = rows.end() - 1;
    }
    it->mean_mae += r.mae;
    it->trials += 1;
  }
  for (auto& row : rows) {
    if (row.trials > 0) row.mean_mae /= static_cast<double>(row.trials);
  }
  return rows;
}

// --- CSV emission -----------------------------------------------------------

// Shortest round-trip decimal form; deterministic across reruns.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Report CSV: leading '#' lines embed the run configuration so identical
// (config, seed, dtype) reruns emit identical bytes.
inline void write_fit_reports_csv(std::ostream& os, const std::vector<FitReport>& reports,
                                  const std::vector<std::string>& config_lines) {
  for (const auto& line : config_lines) os << "# " << line << "\n";
  os << "size,trial,target_kind,fitter,mae,iters,seed\n";
  for (const auto& r : reports) {
    os << r.input_size << ',' << r.trial << ',' << to_string(r.target) << ','
       << to_string(r.fitter) << ',' << format_double(r.mae) << ',' << r.iters << ',' << r.seed
       << "\n";
  }
}

}  // namespace arconv
