#include "atongue/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atongue {

EpsSeries::EpsSeries(int order) : coeffs_(static_cast<std::size_t>(std::max(order, 0)) + 1) {}

EpsSeries::EpsSeries(std::vector<TrigPoly> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back();
}

EpsSeries EpsSeries::truncated(int order) const {
  EpsSeries out(order);
  for (int n = 0; n <= std::min(order, this->order()); ++n) out[n] = (*this)[n];
  return out;
}

EpsSeries& EpsSeries::operator+=(const EpsSeries& rhs) {
  if (rhs.order() > order()) coeffs_.resize(rhs.coeffs_.size());
  for (int n = 0; n <= rhs.order(); ++n) coeffs_[n] += rhs.coeffs_[n];
  return *this;
}

EpsSeries& EpsSeries::operator-=(const EpsSeries& rhs) {
  if (rhs.order() > order()) coeffs_.resize(rhs.coeffs_.size());
  for (int n = 0; n <= rhs.order(); ++n) coeffs_[n] -= rhs.coeffs_[n];
  return *this;
}

EpsSeries operator-(EpsSeries a) {
  for (auto& c : a.coeffs_) c *= -1.0;
  return a;
}

EpsSeries EpsSeries::scaled(const TrigPoly& p, int max_degree) const {
  EpsSeries out(order());
  for (int n = 0; n <= order(); ++n) out[n] = product(coeffs_[n], p, max_degree);
  return out;
}

EpsSeries EpsSeries::times_eps() const {
  EpsSeries out(order() + 1);
  for (int n = 0; n <= order(); ++n) out[n + 1] = coeffs_[n];
  return out;
}

EpsSeries multiply(const EpsSeries& a, const EpsSeries& b, int max_degree) {
  const int order = std::min(a.order(), b.order());
  EpsSeries out(order);
  for (int i = 0; i <= order; ++i) {
    if (a[i].support_degree() == 0 && a[i].cos_coeff(0) == 0.0) continue;
    for (int j = 0; i + j <= order; ++j) {
      if (b[j].support_degree() == 0 && b[j].cos_coeff(0) == 0.0) continue;
      out[i + j] += product(a[i], b[j], max_degree);
    }
  }
  return out;
}

double eval_series(const EpsSeries& s, double x, double eps) {
  // Horner in eps.
  double sum = 0.0;
  for (int n = s.order(); n >= 0; --n) sum = sum * eps + s[n].eval(x);
  return sum;
}

bool is_structurally_constant(const TrigPoly& p) {
  const double tol = 1e-10 * (1.0 + p.norm());
  for (int k = 1; k <= p.capacity(); ++k) {
    if (std::max(std::abs(p.cos_coeff(k)), std::abs(p.sin_coeff(k))) >= tol) return false;
  }
  return true;
}

SeriesSolution expand(const MapParams& m, int order, int max_degree) {
  m.validate_coprime();
  if (order < 1) throw std::invalid_argument("expand: order must be >= 1");
  const int d = std::max(1, m.f.degree());
  const int cap = order * d;
  if (cap > max_degree) {
    throw CapacityError("expand: order " + std::to_string(order) + " times degree " +
                        std::to_string(d) + " exceeds capacity " + std::to_string(max_degree));
  }
  const int q = m.q;
  const double mu = m.mu();

  // taylor[i][k] = f^{(k)}(x + i mu) / k!
  std::vector<std::vector<TrigPoly>> taylor(static_cast<std::size_t>(q));
  {
    std::vector<TrigPoly> derivs{m.f};
    for (int k = 1; k < order; ++k) derivs.push_back(derivative(derivs.back()));
    for (int i = 0; i < q; ++i) {
      double factorial = 1.0;
      for (int k = 0; k < order; ++k) {
        if (k > 0) factorial *= k;
        taylor[i].push_back(shift(derivs[k], i * mu) * (1.0 / factorial));
      }
    }
  }

  SeriesSolution sol;
  sol.p = m.p;
  sol.q = q;
  sol.order = order;
  sol.delta = EpsSeries(order);
  sol.y = EpsSeries(order);

  for (int n = 1; n <= order; ++n) {
    // Propagate the orbit deviations xi_i = x_i - x - i mu and eta_i = y_i
    // with Delta_n = Y_n = 0; the order-n residuals then fix both.
    const EpsSeries delta = sol.delta.truncated(n);
    const EpsSeries y0 = sol.y.truncated(n);
    EpsSeries xi(n);
    EpsSeries eta = y0;
    for (int i = 0; i < q; ++i) {
      const EpsSeries xi_low = xi.truncated(n - 1);
      EpsSeries power(n - 1);
      power[0] = TrigPoly::constant(1.0);
      EpsSeries fx(n - 1);
      for (int k = 0; k < n; ++k) {
        if (k > 0) power = multiply(power, xi_low, cap);
        fx += power.scaled(taylor[i][k], cap);
      }
      const EpsSeries g = -delta - fx.times_eps();
      xi += eta;
      xi += g;
      eta += g;
    }
    const TrigPoly s_known = eta[n] - y0[n];
    const TrigPoly r_known = xi[n];
    sol.delta[n] = s_known * (1.0 / q);
    sol.y[n] = sol.delta[n] * ((q + 1) / 2.0) - r_known * (1.0 / q);
  }

  for (int n = 1; n <= order; ++n) {
    if (!is_structurally_constant(sol.delta[n])) {
      sol.r = n;
      break;
    }
  }
  const int n_const = sol.r ? *sol.r : order + 1;
  for (int n = 0; n < n_const; ++n) sol.A.push_back(sol.delta[n].cos_coeff(0));
  return sol;
}

FirstOrderReport verify_first_order(const SeriesSolution& sol, const MapParams& m) {
  if (sol.order < 1) throw std::invalid_argument("verify_first_order: need order >= 1");
  const TrigPoly fbar = shift_average(m.f, m.q, m.mu());
  const TrigPoly fbarbar = weighted_shift_average(m.f, m.q, m.mu());
  FirstOrderReport rep;
  rep.delta1_error = max_coeff_diff(sol.delta[1], -fbar);
  rep.y1_error = max_coeff_diff(sol.y[1], fbar * (-(m.q + 1) / 2.0) + fbarbar);
  return rep;
}

PeriodicityReport verify_periodicity(const SeriesSolution& sol, const MapParams& m) {
  if (!sol.r) throw std::logic_error("verify_periodicity: leading index r was not detected");
  PeriodicityReport rep;
  rep.r = *sol.r;
  const TrigPoly& lead = sol.delta[rep.r];
  rep.norm = lead.norm();
  rep.shift_residual = max_coeff_diff(shift(lead, m.mu()), lead);
  rep.support = frequency_support(lead, 1e-10 * (1.0 + rep.norm));
  rep.support_in_qz = std::all_of(rep.support.begin(), rep.support.end(),
                                  [&](int k) { return k % m.q == 0; });
  rep.passes = rep.shift_residual < 1e-10 * rep.norm && rep.support_in_qz;
  return rep;
}

double predicted_width(const SeriesSolution& sol, double eps) {
  if (!sol.r) throw std::logic_error("predicted_width: leading index r was not detected");
  const Extrema e = range_extrema(sol.delta[*sol.r]);
  return (e.max - e.min) * std::pow(eps, *sol.r);
}

void to_json(nlohmann::json& j, const SeriesSolution& s) {
  j = nlohmann::json{{"q", s.q}, {"p", s.p}, {"N", s.order}};
  j["r"] = s.r ? nlohmann::json(*s.r) : nlohmann::json(nullptr);
  j["Delta"] = s.delta.coeffs();
  j["Y"] = s.y.coeffs();
  j["A"] = s.A;
}

}  // namespace atongue
