#pragma once

#include <json.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atongue {

/// Coefficients below this are ignored when reporting the degree of a polynomial.
inline constexpr double kDegreeTolerance = 1e-12;

/// Products whose degree exceeds this limit are rejected unless the caller
/// passes its own limit.
inline constexpr int kDefaultMaxDegree = 4096;

/// Raised when a product would exceed the configured degree capacity.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real trigonometric polynomial
///
///   P(x) = a_0 + sum_{k=1}^{D} (a_k cos kx + b_k sin kx).
///
/// D is the nominal capacity; the effective degree is the highest harmonic
/// whose coefficients exceed kDegreeTolerance. Coefficients are never trimmed
/// implicitly, so exact structural zeros stay observable.
class TrigPoly {
 public:
  /// The zero polynomial.
  TrigPoly();

  /// `cos_coeffs` holds a_0..a_D, `sin_coeffs` holds b_1..b_D. The shorter
  /// list is zero-padded.
  TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static TrigPoly constant(double c);
  /// c cos kx + s sin kx
  static TrigPoly harmonic(int k, double c, double s);
  /// Least-squares (exact for D <= degree) reconstruction from
  /// 2*(degree+1) uniform samples on [0, 2pi).
  static TrigPoly from_samples(std::span<const double> samples, int degree);

  int capacity() const { return static_cast<int>(a_.size()) - 1; }
  int degree(double tol = kDegreeTolerance) const;
  /// Largest k with a nonzero coefficient (no tolerance).
  int support_degree() const;

  double cos_coeff(int k) const;
  double sin_coeff(int k) const;  // b_0 is always 0

  double eval(double x) const;
  double eval_derivative(double x, int order = 1) const;

  /// max |coefficient|
  double norm() const;
  bool is_constant(double tol) const;

  TrigPoly& operator+=(const TrigPoly& rhs);
  TrigPoly& operator-=(const TrigPoly& rhs);
  TrigPoly& operator*=(double s);

  friend TrigPoly operator+(TrigPoly lhs, const TrigPoly& rhs) { return lhs += rhs; }
  friend TrigPoly operator-(TrigPoly lhs, const TrigPoly& rhs) { return lhs -= rhs; }
  friend TrigPoly operator*(TrigPoly lhs, double s) { return lhs *= s; }
  friend TrigPoly operator*(double s, TrigPoly rhs) { return rhs *= s; }
  friend TrigPoly operator-(TrigPoly p) { return p *= -1.0; }

  /// Largest coefficient difference (missing coefficients count as 0).
  friend double max_coeff_diff(const TrigPoly& lhs, const TrigPoly& rhs);

 private:
  void resize(int capacity);

  std::vector<double> a_;  // a_0..a_D
  std::vector<double> b_;  // b_0 (unused, kept 0)..b_D
};

TrigPoly derivative(const TrigPoly& p);
TrigPoly derivative(const TrigPoly& p, int order);

/// Q(x) = P(x + s)
TrigPoly shift(const TrigPoly& p, double s);

/// Pointwise product via product-to-sum identities. Throws CapacityError when
/// support_degree(P) + support_degree(Q) > max_degree.
TrigPoly product(const TrigPoly& p, const TrigPoly& q, int max_degree = kDefaultMaxDegree);

/// (1/q) sum_{k=0}^{q-1} f(x + k mu)
TrigPoly shift_average(const TrigPoly& f, int q, double mu);

/// (1/q) sum_{k=0}^{q-1} (q - k) f(x + k mu)
TrigPoly weighted_shift_average(const TrigPoly& f, int q, double mu);

struct Extrema {
  double max = 0.0;
  double min = 0.0;
  double argmax = 0.0;
  double argmin = 0.0;
};

/// Global extrema over [0, 2pi): dense scan on 64*(d+1) points, then
/// safeguarded Newton on P' = 0.
Extrema range_extrema(const TrigPoly& p);

/// Harmonics k with max(|a_k|, |b_k|) > tol, ascending.
std::vector<int> frequency_support(const TrigPoly& p, double tol);

/// "sin", "cos", "sin2x", "3cos", ... or a JSON object {"cos":[...],"sin":[...]}.
TrigPoly parse_trigpoly(const std::string& text);

void to_json(nlohmann::json& j, const TrigPoly& p);
void from_json(const nlohmann::json& j, TrigPoly& p);

}  // namespace atongue
