#pragma once

#include "atongue/trigpoly.hpp"

#include <array>
#include <numbers>
#include <vector>

namespace atongue {

/// Drifted standard map in shifted coordinates y = v - mu:
///
///   x' = x + y + mu + g(x),   y' = y + g(x),   g(x) = -delta - eps f(x).
///
/// mu = 2 pi p / q is derived from (p, q) on every access.
struct MapParams {
  double eps = 0.0;
  double delta = 0.0;
  TrigPoly f = TrigPoly::harmonic(1, 0.0, 1.0);
  int p = 0;
  int q = 1;

  double mu() const { return 2.0 * std::numbers::pi * p / q; }
  /// Copy with a different (eps, delta).
  MapParams with(double new_eps, double new_delta) const;
  /// Throws std::invalid_argument unless q >= 1 and eps >= 0.
  void validate() const;
  /// Additionally requires gcd(p, q) == 1.
  void validate_coprime() const;
};

/// (x, y) with x an unbounded lift.
struct PhaseState {
  double x = 0.0;
  double y = 0.0;
};

/// Deviation of the n-th iterate from the rotation by n mu.
struct RemainderPair {
  double R = 0.0;
  double S = 0.0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 mat_mul(const Mat2& a, const Mat2& b);
inline double trace(const Mat2& m) { return m[0][0] + m[1][1]; }
inline double det(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

/// g(x) = -delta - eps f(x)
double drift_force(double x, const MapParams& m);

PhaseState step(const PhaseState& s, const MapParams& m);

/// [[1 + g'(x), 1], [g'(x), 1]]
Mat2 tangent_step(const PhaseState& s, const MapParams& m);

/// states[0] = s0, states[i+1] = step(states[i]); length n + 1.
std::vector<PhaseState> iterate(const PhaseState& s0, const MapParams& m, int n);

/// nR = sum_{k<n} (n-k) g(x_k) + n y0 and nS = sum_{k<n} g(x_k).
RemainderPair remainders(const PhaseState& s0, const MapParams& m, int n);

/// (x_n - x_0 - n mu, y_n - y_0) from direct iteration.
RemainderPair remainders_by_definition(const PhaseState& s0, const MapParams& m, int n);

/// Product of tangent maps along n steps starting at s0.
Mat2 monodromy(const PhaseState& s0, const MapParams& m, int n);

}  // namespace atongue
