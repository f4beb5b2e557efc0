#include "atongue/cylmap.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace atongue {

MapParams MapParams::with(double new_eps, double new_delta) const {
  MapParams out = *this;
  out.eps = new_eps;
  out.delta = new_delta;
  return out;
}

void MapParams::validate() const {
  if (q < 1) throw std::invalid_argument("MapParams: q must be >= 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("MapParams: eps must be finite and >= 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("MapParams: delta must be finite");
}

void MapParams::validate_coprime() const {
  validate();
  if (p < 0) throw std::invalid_argument("MapParams: p must be >= 0");
  if (std::gcd(p, q) != 1) {
    throw std::invalid_argument("MapParams: p/q = " + std::to_string(p) + "/" + std::to_string(q) +
                                " is not in lowest terms");
  }
}

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

double drift_force(double x, const MapParams& m) { return -m.delta - m.eps * m.f.eval(x); }

PhaseState step(const PhaseState& s, const MapParams& m) {
  const double g = drift_force(s.x, m);
  return {s.x + s.y + m.mu() + g, s.y + g};
}

Mat2 tangent_step(const PhaseState& s, const MapParams& m) {
  const double gp = -m.eps * m.f.eval_derivative(s.x);
  return Mat2{{{1.0 + gp, 1.0}, {gp, 1.0}}};
}

std::vector<PhaseState> iterate(const PhaseState& s0, const MapParams& m, int n) {
  if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
  std::vector<PhaseState> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  states.push_back(s0);
  for (int i = 0; i < n; ++i) states.push_back(step(states.back(), m));
  return states;
}

RemainderPair remainders(const PhaseState& s0, const MapParams& m, int n) {
  if (n < 1) throw std::invalid_argument("remainders: n must be >= 1");
  RemainderPair r{n * s0.y, 0.0};
  PhaseState s = s0;
  for (int k = 0; k < n; ++k) {
    const double g = drift_force(s.x, m);
    r.R += (n - k) * g;
    r.S += g;
    s = {s.x + s.y + m.mu() + g, s.y + g};
  }
  return r;
}

RemainderPair remainders_by_definition(const PhaseState& s0, const MapParams& m, int n) {
  if (n < 1) throw std::invalid_argument("remainders: n must be >= 1");
  PhaseState s = s0;
  for (int k = 0; k < n; ++k) s = step(s, m);
  return {s.x - s0.x - n * m.mu(), s.y - s0.y};
}

Mat2 monodromy(const PhaseState& s0, const MapParams& m, int n) {
  Mat2 acc{{{1.0, 0.0}, {0.0, 1.0}}};
  PhaseState s = s0;
  for (int k = 0; k < n; ++k) {
    acc = mat_mul(tangent_step(s, m), acc);
    s = step(s, m);
  }
  return acc;
}

}  // namespace atongue
