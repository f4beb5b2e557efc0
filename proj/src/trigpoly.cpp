#include "atongue/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>

namespace atongue {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TrigPoly::TrigPoly() : a_{0.0}, b_{0.0} {}

TrigPoly::TrigPoly(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
  if (cos_coeffs.empty()) cos_coeffs.push_back(0.0);
  const auto cap = std::max(cos_coeffs.size() - 1, sin_coeffs.size());
  a_ = std::move(cos_coeffs);
  a_.resize(cap + 1, 0.0);
  b_.assign(cap + 1, 0.0);
  std::copy(sin_coeffs.begin(), sin_coeffs.end(), b_.begin() + 1);
  for (std::size_t k = 0; k <= cap; ++k) {
    if (!std::isfinite(a_[k]) || !std::isfinite(b_[k]))
      throw std::invalid_argument("TrigPoly: non-finite coefficient");
  }
}

TrigPoly TrigPoly::constant(double c) { return TrigPoly({c}, {}); }

TrigPoly TrigPoly::harmonic(int k, double c, double s) {
  if (k < 0) throw std::invalid_argument("TrigPoly::harmonic: negative frequency");
  TrigPoly p;
  p.resize(k);
  p.a_[k] = c;
  if (k > 0) p.b_[k] = s;
  return p;
}

TrigPoly TrigPoly::from_samples(std::span<const double> samples, int degree) {
  const auto n = samples.size();
  if (degree < 0 || n < static_cast<std::size_t>(2 * degree + 1))
    throw std::invalid_argument("TrigPoly::from_samples: too few samples for degree");
  TrigPoly p;
  p.resize(degree);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    for (int k = 0; k <= degree; ++k) {
      p.a_[k] += samples[j] * std::cos(k * x);
      p.b_[k] += samples[j] * std::sin(k * x);
    }
  }
  const double scale = 2.0 / static_cast<double>(n);
  for (int k = 0; k <= degree; ++k) {
    p.a_[k] *= scale;
    p.b_[k] *= scale;
  }
  p.a_[0] *= 0.5;
  p.b_[0] = 0.0;
  // Nyquist harmonic is aliased onto cosine only when n == 2k.
  if (n % 2 == 0 && static_cast<int>(n / 2) == degree) {
    p.a_[degree] *= 0.5;
    p.b_[degree] = 0.0;
  }
  return p;
}

void TrigPoly::resize(int capacity) {
  if (capacity < 0) capacity = 0;
  a_.resize(capacity + 1, 0.0);
  b_.resize(capacity + 1, 0.0);
}

int TrigPoly::degree(double tol) const {
  for (int k = capacity(); k > 0; --k) {
    if (std::max(std::abs(a_[k]), std::abs(b_[k])) > tol) return k;
  }
  return 0;
}

int TrigPoly::support_degree() const { return degree(0.0); }

double TrigPoly::cos_coeff(int k) const {
  return (k >= 0 && k <= capacity()) ? a_[k] : 0.0;
}

double TrigPoly::sin_coeff(int k) const {
  return (k >= 1 && k <= capacity()) ? b_[k] : 0.0;
}

double TrigPoly::eval(double x) const {
  // cos kx + i sin kx by repeated rotation; renormalised every step.
  const double c1 = std::cos(x);
  const double s1 = std::sin(x);
  double ck = 1.0;
  double sk = 0.0;
  double sum = a_[0];
  for (int k = 1; k <= capacity(); ++k) {
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
    sum += a_[k] * ck + b_[k] * sk;
  }
  return sum;
}

double TrigPoly::eval_derivative(double x, int order) const {
  double sum = order == 0 ? a_[0] : 0.0;
  for (int k = 1; k <= capacity(); ++k) {
    // d^n/dx^n of cos(kx) = k^n cos(kx + n pi/2)
    const double phase = k * x + order * std::numbers::pi / 2.0;
    const double kn = std::pow(static_cast<double>(k), order);
    sum += kn * (a_[k] * std::cos(phase) + b_[k] * std::sin(phase));
  }
  return sum;
}

double TrigPoly::norm() const {
  double m = 0.0;
  for (int k = 0; k <= capacity(); ++k) m = std::max({m, std::abs(a_[k]), std::abs(b_[k])});
  return m;
}

bool TrigPoly::is_constant(double tol) const { return degree(tol) == 0; }

TrigPoly& TrigPoly::operator+=(const TrigPoly& rhs) {
  if (rhs.capacity() > capacity()) resize(rhs.capacity());
  for (int k = 0; k <= rhs.capacity(); ++k) {
    a_[k] += rhs.a_[k];
    b_[k] += rhs.b_[k];
  }
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& rhs) {
  if (rhs.capacity() > capacity()) resize(rhs.capacity());
  for (int k = 0; k <= rhs.capacity(); ++k) {
    a_[k] -= rhs.a_[k];
    b_[k] -= rhs.b_[k];
  }
  return *this;
}

TrigPoly& TrigPoly::operator*=(double s) {
  for (auto& v : a_) v *= s;
  for (auto& v : b_) v *= s;
  return *this;
}

double max_coeff_diff(const TrigPoly& lhs, const TrigPoly& rhs) {
  const int cap = std::max(lhs.capacity(), rhs.capacity());
  double m = 0.0;
  for (int k = 0; k <= cap; ++k) {
    m = std::max(m, std::abs(lhs.cos_coeff(k) - rhs.cos_coeff(k)));
    m = std::max(m, std::abs(lhs.sin_coeff(k) - rhs.sin_coeff(k)));
  }
  return m;
}

TrigPoly derivative(const TrigPoly& p) {
  const int cap = p.capacity();
  std::vector<double> a(cap + 1, 0.0);
  std::vector<double> b(cap, 0.0);
  for (int k = 1; k <= cap; ++k) {
    a[k] = k * p.sin_coeff(k);
    b[k - 1] = -k * p.cos_coeff(k);
  }
  return TrigPoly(std::move(a), std::move(b));
}

TrigPoly derivative(const TrigPoly& p, int order) {
  TrigPoly d = p;
  for (int i = 0; i < order; ++i) d = derivative(d);
  return d;
}

TrigPoly shift(const TrigPoly& p, double s) {
  const int cap = p.capacity();
  std::vector<double> a(cap + 1, 0.0);
  std::vector<double> b(cap, 0.0);
  a[0] = p.cos_coeff(0);
  for (int k = 1; k <= cap; ++k) {
    const double c = std::cos(k * s);
    const double sn = std::sin(k * s);
    const double ak = p.cos_coeff(k);
    const double bk = p.sin_coeff(k);
    a[k] = ak * c + bk * sn;
    b[k - 1] = bk * c - ak * sn;
  }
  return TrigPoly(std::move(a), std::move(b));
}

TrigPoly product(const TrigPoly& p, const TrigPoly& q, int max_degree) {
  const int dp = p.support_degree();
  const int dq = q.support_degree();
  if (dp + dq > max_degree) {
    throw CapacityError("TrigPoly product degree " + std::to_string(dp + dq) +
                        " exceeds capacity " + std::to_string(max_degree));
  }
  const int cap = dp + dq;
  std::vector<double> a(cap + 1, 0.0);
  std::vector<double> b(cap + 1, 0.0);  // index 0 dropped below

  // Accumulate c*cos(m x) and s*sin(m x) for signed m.
  auto add_cos = [&](int m, double v) { a[std::abs(m)] += v; };
  auto add_sin = [&](int m, double v) {
    if (m > 0) b[m] += v;
    else if (m < 0) b[-m] -= v;
  };

  for (int j = 0; j <= dp; ++j) {
    const double aj = p.cos_coeff(j);
    const double bj = p.sin_coeff(j);
    for (int k = 0; k <= dq; ++k) {
      const double ak = q.cos_coeff(k);
      const double bk = q.sin_coeff(k);
      if (aj != 0.0 && ak != 0.0) {  // cos j cos k
        add_cos(j - k, 0.5 * aj * ak);
        add_cos(j + k, 0.5 * aj * ak);
      }
      if (bj != 0.0 && bk != 0.0) {  // sin j sin k
        add_cos(j - k, 0.5 * bj * bk);
        add_cos(j + k, -0.5 * bj * bk);
      }
      if (bj != 0.0 && ak != 0.0) {  // sin j cos k
        add_sin(j + k, 0.5 * bj * ak);
        add_sin(j - k, 0.5 * bj * ak);
      }
      if (aj != 0.0 && bk != 0.0) {  // cos j sin k
        add_sin(j + k, 0.5 * aj * bk);
        add_sin(k - j, 0.5 * aj * bk);
      }
    }
  }
  return TrigPoly(std::move(a), std::vector<double>(b.begin() + 1, b.end()));
}

TrigPoly shift_average(const TrigPoly& f, int q, double mu) {
  if (q < 1) throw std::invalid_argument("shift_average: q must be >= 1");
  TrigPoly sum = TrigPoly::constant(0.0);
  for (int k = 0; k < q; ++k) sum += shift(f, k * mu);
  return sum * (1.0 / q);
}

TrigPoly weighted_shift_average(const TrigPoly& f, int q, double mu) {
  if (q < 1) throw std::invalid_argument("weighted_shift_average: q must be >= 1");
  TrigPoly sum = TrigPoly::constant(0.0);
  for (int k = 0; k < q; ++k) sum += shift(f, k * mu) * static_cast<double>(q - k);
  return sum * (1.0 / q);
}

namespace {

// Root of P' in [lo, hi] given a sign change; Newton with bisection fallback.
double refine_critical_point(const TrigPoly& p, double lo, double hi) {
  double flo = p.eval_derivative(lo);
  double fhi = p.eval_derivative(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return 0.5 * (lo + hi);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double d1 = p.eval_derivative(x);
    if (d1 == 0.0) return x;
    if ((d1 > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = d1;
    } else {
      hi = x;
    }
    const double d2 = p.eval_derivative(x, 2);
    double next = d2 != 0.0 ? x - d1 / d2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x)) || hi - lo < 1e-15) return next;
    x = next;
  }
  return x;
}

}  // namespace

Extrema range_extrema(const TrigPoly& p) {
  const int d = p.degree();
  if (d == 0) {
    const double c = p.eval(0.0);
    return {c, c, 0.0, 0.0};
  }
  const int n = 64 * (d + 1);
  const double h = kTwoPi / n;
  int imax = 0;
  int imin = 0;
  double vmax = p.eval(0.0);
  double vmin = vmax;
  for (int i = 1; i < n; ++i) {
    const double v = p.eval(i * h);
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
  }
  auto polish = [&](int i, double best, bool want_max) {
    const double x = refine_critical_point(p, (i - 1) * h, (i + 1) * h);
    const double v = p.eval(x);
    const bool better = want_max ? v >= best : v <= best;
    double xr = better ? x : i * h;
    xr = std::fmod(xr, kTwoPi);
    if (xr < 0.0) xr += kTwoPi;
    return std::pair{better ? v : best, xr};
  };
  const auto [mx, xmx] = polish(imax, vmax, true);
  const auto [mn, xmn] = polish(imin, vmin, false);
  return {mx, mn, xmx, xmn};
}

std::vector<int> frequency_support(const TrigPoly& p, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("frequency_support: tolerance must be positive");
  std::vector<int> out;
  for (int k = 0; k <= p.capacity(); ++k) {
    if (std::max(std::abs(p.cos_coeff(k)), std::abs(p.sin_coeff(k))) > tol) out.push_back(k);
  }
  return out;
}

TrigPoly parse_trigpoly(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '{') {
    return nlohmann::json::parse(text).get<TrigPoly>();
  }
  // Sum of terms: [sign][coef][*](sin|cos)[k][x] or a bare number.
  static const std::regex term(
      R"(\s*([+-])?\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(?:(sin|cos)\s*(\d*)\s*x?)?\s*)");
  TrigPoly result;
  auto it = text.cbegin();
  bool any = false;
  while (it != text.cend()) {
    std::smatch m;
    if (!std::regex_search(it, text.cend(), m, term, std::regex_constants::match_continuous) ||
        m.length(0) == 0 || (!m[2].matched && !m[3].matched)) {
      throw std::invalid_argument("cannot parse trigonometric polynomial: '" + text + "'");
    }
    if (any && !m[1].matched) {
      throw std::invalid_argument("missing operator in trigonometric polynomial: '" + text + "'");
    }
    const double sign = (m[1].matched && m[1].str() == "-") ? -1.0 : 1.0;
    const double coef = sign * (m[2].matched ? std::stod(m[2].str()) : 1.0);
    if (m[3].matched) {
      const int k = m[4].length() > 0 ? std::stoi(m[4].str()) : 1;
      if (m[3].str() == "sin") {
        if (k == 0) throw std::invalid_argument("sin0 is identically zero");
        result += TrigPoly::harmonic(k, 0.0, coef);
      } else {
        result += TrigPoly::harmonic(k, coef, 0.0);
      }
    } else {
      result += TrigPoly::constant(coef);
    }
    any = true;
    it = m[0].second;
  }
  if (!any) throw std::invalid_argument("empty trigonometric polynomial");
  return result;
}

void to_json(nlohmann::json& j, const TrigPoly& p) {
  std::vector<double> a(p.capacity() + 1);
  std::vector<double> b(p.capacity());
  for (int k = 0; k <= p.capacity(); ++k) a[k] = p.cos_coeff(k);
  for (int k = 1; k <= p.capacity(); ++k) b[k - 1] = p.sin_coeff(k);
  j = nlohmann::json{{"cos", a}, {"sin", b}};
}

void from_json(const nlohmann::json& j, TrigPoly& p) {
  auto a = j.value("cos", std::vector<double>{});
  auto b = j.value("sin", std::vector<double>{});
  p = TrigPoly(std::move(a), std::move(b));
}

}  // namespace atongue
