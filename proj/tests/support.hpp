#pragma once

// Shared generators and brute-force references for the unit suites.

#include "atongue/trigpoly.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Coefficients uniform in [-1, 1] up to `degree`.
  atongue::TrigPoly trigpoly(int degree) {
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    std::vector<double> b(static_cast<std::size_t>(degree));
    for (auto& v : a) v = uniform(-1.0, 1.0);
    for (auto& v : b) v = uniform(-1.0, 1.0);
    return atongue::TrigPoly(a, b);
  }

 private:
  std::mt19937_64 rng_;
};

/// Term-by-term evaluation straight from the coefficients.
inline double naive_eval(const atongue::TrigPoly& p, double x) {
  double s = p.cos_coeff(0);
  for (int k = 1; k <= p.capacity(); ++k) s += p.cos_coeff(k) * std::cos(k * x) + p.sin_coeff(k) * std::sin(k * x);
  return s;
}

inline std::vector<double> grid(int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = kTwoPi * i / n;
  return xs;
}

}  // namespace testing
