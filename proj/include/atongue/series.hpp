#pragma once

#include "atongue/cylmap.hpp"
#include "atongue/trigpoly.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace atongue {

/// Truncated power series sum_{n=0}^{N} c_n(x) eps^n with TrigPoly coefficients.
class EpsSeries {
 public:
  explicit EpsSeries(int order = 0);
  explicit EpsSeries(std::vector<TrigPoly> coeffs);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const TrigPoly& operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }
  TrigPoly& operator[](int n) { return coeffs_.at(static_cast<std::size_t>(n)); }
  const std::vector<TrigPoly>& coeffs() const { return coeffs_; }

  /// Same series truncated (or zero-extended) to `order`.
  EpsSeries truncated(int order) const;

  EpsSeries& operator+=(const EpsSeries& rhs);
  EpsSeries& operator-=(const EpsSeries& rhs);
  friend EpsSeries operator+(EpsSeries a, const EpsSeries& b) { return a += b; }
  friend EpsSeries operator-(EpsSeries a, const EpsSeries& b) { return a -= b; }
  friend EpsSeries operator-(EpsSeries a);

  /// Coefficient-wise multiplication by a polynomial in x.
  EpsSeries scaled(const TrigPoly& p, int max_degree) const;
  /// Multiplication by eps: coefficients move up one index and the order grows by one.
  EpsSeries times_eps() const;

  /// Cauchy product truncated at the smaller order.
  friend EpsSeries multiply(const EpsSeries& a, const EpsSeries& b, int max_degree);

 private:
  std::vector<TrigPoly> coeffs_;
};

double eval_series(const EpsSeries& s, double x, double eps);

/// Constant coefficients of Delta_n for n < r plus the first x-dependent index.
struct SeriesSolution {
  int p = 0;
  int q = 1;
  int order = 0;
  EpsSeries delta;
  EpsSeries y;
  std::optional<int> r;
  std::vector<double> A;  // a_0 of Delta_n, n = 0..r-1 (0..N when r is not detected)
};

/// Declares Delta_n constant when all harmonics k >= 1 are below
/// 1e-10 (1 + norm(Delta_n)).
bool is_structurally_constant(const TrigPoly& p);

/// Order-by-order solution of qR = qS = 0 for Delta_n and Y_n, n = 1..N.
/// Requires gcd(p, q) = 1. Throws CapacityError when N deg(f) exceeds
/// `max_degree`.
SeriesSolution expand(const MapParams& m, int order, int max_degree = kDefaultMaxDegree);

struct FirstOrderReport {
  double delta1_error = 0.0;  // vs -fbar
  double y1_error = 0.0;      // vs -(q+1)/2 fbar + fbarbar
  double max_error() const { return std::max(delta1_error, y1_error); }
};

FirstOrderReport verify_first_order(const SeriesSolution& sol, const MapParams& m);

struct PeriodicityReport {
  int r = 0;
  double shift_residual = 0.0;  // norm(shift(Delta_r, mu) - Delta_r)
  double norm = 0.0;            // norm(Delta_r)
  std::vector<int> support;
  bool support_in_qz = false;
  bool passes = false;  // shift_residual < 1e-10 norm and support in qZ
};

/// Requires a detected r; throws std::logic_error otherwise.
PeriodicityReport verify_periodicity(const SeriesSolution& sol, const MapParams& m);

/// range(Delta_r) eps^r; throws std::logic_error when r is not detected.
double predicted_width(const SeriesSolution& sol, double eps);

void to_json(nlohmann::json& j, const SeriesSolution& s);

}  // namespace atongue
