#pragma once

#include <cmath>
#include <cstdint>

#include "arconv/errors.hpp"

namespace arconv {

// SplitMix64 generator (Steele/Lea/Flood). The whole sequence is a pure
// function of the 64-bit seed with no hidden platform state, so seeded
// experiments replay bit-identically. Uniform draws take the top 53 bits
// of a u64 and scale by 2^-53, which is bit-portable; normal draws go
// through libm (sqrt/log/sin/cos) and are deterministic per build.
//
// Single-owner: never share one Rng across threads. Parallel work items
// should each take split(i), which derives an independent child stream
// from the original seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) {
      throw ArgumentError("Rng::uniform: require lo < hi");
    }
    return lo + (hi - lo) * next_uniform();
  }

  // Normal(mu, sigma) via Box-Muller; the spare draw is cached.
  double normal(double mu, double sigma) {
    if (!(sigma > 0.0)) {
      throw ArgumentError("Rng::normal: require sigma > 0");
    }
    if (have_spare_) {
      have_spare_ = false;
      return mu + sigma * spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_uniform();
    } while (u1 <= 0.0);
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return mu + sigma * r * std::cos(a);
  }

  // Normal truncated to mu +- 2 sigma by resampling.
  double truncated_normal(double mu, double sigma) {
    double z = 0.0;
    do {
      z = normal(0.0, 1.0);
    } while (std::abs(z) > 2.0);
    return mu + sigma * z;
  }

  // Child generator for work item `stream`. Pure function of the original
  // seed and the stream index, independent of how many values the parent
  // has already drawn.
  Rng split(std::uint64_t stream) const {
    std::uint64_t z = seed_ ^ (0xD1B54A32D192ED03ull * (stream + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t seed_ = 0;
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace arconv
