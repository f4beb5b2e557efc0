#include "atongue/sgchain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace atongue {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBlowUp = 1e8;

// In-place RK4 stepper over a flat (pos, vel) state with preallocated stages.
class Rk4 {
 public:
  explicit Rk4(const ChainParams& c) : c_(c), n_(static_cast<std::size_t>(c.q)) {
    for (auto* v : {&k1x_, &k1v_, &k2x_, &k2v_, &k3x_, &k3v_, &k4x_, &k4v_, &tx_, &tv_}) v->resize(n_);
  }

  void step(std::vector<double>& x, std::vector<double>& v, double h) {
    accel(x, v, k1v_);
    k1x_ = v;
    for (std::size_t i = 0; i < n_; ++i) {
      tx_[i] = x[i] + 0.5 * h * k1x_[i];
      tv_[i] = v[i] + 0.5 * h * k1v_[i];
    }
    k2x_ = tv_;
    accel(tx_, tv_, k2v_);
    for (std::size_t i = 0; i < n_; ++i) {
      tx_[i] = x[i] + 0.5 * h * k2x_[i];
      tv_[i] = v[i] + 0.5 * h * k2v_[i];
    }
    k3x_ = tv_;
    accel(tx_, tv_, k3v_);
    for (std::size_t i = 0; i < n_; ++i) {
      tx_[i] = x[i] + h * k3x_[i];
      tv_[i] = v[i] + h * k3v_[i];
    }
    k4x_ = tv_;
    accel(tx_, tv_, k4v_);
    for (std::size_t i = 0; i < n_; ++i) {
      x[i] += h / 6.0 * (k1x_[i] + 2.0 * k2x_[i] + 2.0 * k3x_[i] + k4x_[i]);
      v[i] += h / 6.0 * (k1v_[i] + 2.0 * k2v_[i] + 2.0 * k3v_[i] + k4v_[i]);
    }
  }

  void accel(const std::vector<double>& x, const std::vector<double>& v, std::vector<double>& a) const {
    const double twist = kTwoPi * c_.p;
    const std::size_t n = n_;
    for (std::size_t k = 0; k < n; ++k) {
      const double right = k + 1 < n ? x[k + 1] : x[0] + twist;
      const double left = k > 0 ? x[k - 1] : x[n - 1] - twist;
      a[k] = right - 2.0 * x[k] + left + c_.delta - c_.gamma * v[k] - c_.eps * std::sin(x[k]);
    }
  }

 private:
  ChainParams c_;
  std::size_t n_;
  std::vector<double> k1x_, k1v_, k2x_, k2v_, k3x_, k3v_, k4x_, k4v_, tx_, tv_;
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_finite(const std::vector<double>& x, double t) {
  for (double xi : x) {
    if (!std::isfinite(xi) || std::abs(xi) > kBlowUp) {
      throw BlowUpError("chain integration blew up at t = " + std::to_string(t));
    }
  }
}

void check_dt(double dt, const ChainParams& c) {
  if (!(dt > 0.0) || dt > max_time_step(c) * (1.0 + 1e-12)) {
    throw std::invalid_argument("chain time step " + std::to_string(dt) + " exceeds limit " +
                                std::to_string(max_time_step(c)));
  }
}

// Dense record of one analysis window: every RK4 step, so cubic Hermite
// interpolation between samples is fourth-order accurate.
class Window {
 public:
  Window(double t0, double h, std::size_t q) : t0_(t0), h_(h), q_(q) {}

  void push(const std::vector<double>& x, const std::vector<double>& v) {
    x_.insert(x_.end(), x.begin(), x.end());
    v_.insert(v_.end(), v.begin(), v.end());
  }
  std::size_t size() const { return x_.size() / q_; }
  double t(std::size_t i) const { return t0_ + h_ * static_cast<double>(i); }
  double t_end() const { return t(size() - 1); }
  double x(std::size_t i, std::size_t k) const { return x_[i * q_ + k]; }

  double x_at(double t, std::size_t k) const {
    const double s = (t - t0_) / h_;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(size() - 2)));
    const double u = s - static_cast<double>(i);
    const double x0 = x_[i * q_ + k];
    const double x1 = x_[(i + 1) * q_ + k];
    const double m0 = v_[i * q_ + k] * h_;
    const double m1 = v_[(i + 1) * q_ + k] * h_;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * x0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * x1 + (u3 - u2) * m1;
  }

  double mean_at(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < q_; ++k) s += x_at(t, k);
    return s / static_cast<double>(q_);
  }
  double mean_sample(std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = 0; k < q_; ++k) s += x(i, k);
    return s / static_cast<double>(q_);
  }

 private:
  double t0_;
  double h_;
  std::size_t q_;
  std::vector<double> x_;
  std::vector<double> v_;
};

// Smallest tau > 0 with mean(t0 + tau) - mean(t0) = target (target > 0 rising
// or < 0 falling); nullopt if the window is too short.
std::optional<double> level_crossing(const Window& w, double target) {
  const double base = w.mean_sample(0);
  const double sgn = target > 0 ? 1.0 : -1.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (sgn * (w.mean_sample(i) - base - target) >= 0.0) {
      double lo = w.t(i - 1);
      double hi = w.t(i);
      for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sgn * (w.mean_at(mid) - base - target) >= 0.0) hi = mid;
        else lo = mid;
      }
      return 0.5 * (lo + hi) - w.t(0);
    }
  }
  return std::nullopt;
}

struct WaveCheck {
  double period;
  double delay_error;
  double periodicity_error;
};

std::optional<WaveCheck> check_wave(const Window& w, const ChainParams& c, double advance) {
  // p != 0: x_k(t + T) = x_k(t) + 2 pi p with T of either sign.
  // p == 0: synchronous rotation, one turn per period, zero delay.
  const double turn = c.p != 0 ? kTwoPi * c.p : kTwoPi * (advance > 0 ? 1.0 : -1.0);
  const double signed_turn = (turn > 0) == (advance > 0) ? turn : -turn;
  const auto tau = level_crossing(w, signed_turn);
  if (!tau) return std::nullopt;
  const double period = (turn > 0) == (advance > 0) ? *tau : -*tau;
  const double delay = c.p != 0 ? period / c.q : 0.0;
  const double t_lo = w.t(0) + std::max({0.0, -period, -delay});
  const double t_hi = w.t_end() - std::max({0.0, period, delay});
  if (t_hi - t_lo < std::abs(period)) return std::nullopt;

  const auto q = static_cast<std::size_t>(c.q);
  const double twist = kTwoPi * c.p;
  WaveCheck out{period, 0.0, 0.0};
  const double h = w.t(1) - w.t(0);
  for (double t = t_lo; t <= t_hi; t += h) {
    for (std::size_t k = 0; k < q; ++k) {
      const double prev = k > 0 ? w.x_at(t + delay, k - 1) : w.x_at(t + delay, q - 1) - twist;
      out.delay_error = std::max(out.delay_error, std::abs(w.x_at(t, k) - prev));
      out.periodicity_error =
          std::max(out.periodicity_error, std::abs(w.x_at(t + period, k) - w.x_at(t, k) - turn));
    }
  }
  return out;
}

}  // namespace

void ChainParams::validate() const {
  if (q < 2) throw std::invalid_argument("ChainParams: q must be >= 2");
  if (!(gamma > 0.0)) throw std::invalid_argument("ChainParams: gamma must be > 0");
  if (!(eps >= 0.0)) throw std::invalid_argument("ChainParams: eps must be >= 0");
  if (!std::isfinite(delta)) throw std::invalid_argument("ChainParams: delta must be finite");
}

ChainState twist_state(const ChainParams& c) {
  ChainState s;
  s.pos.resize(static_cast<std::size_t>(c.q));
  s.vel.assign(static_cast<std::size_t>(c.q), 0.0);
  for (int k = 0; k < c.q; ++k) s.pos[k] = kTwoPi * c.p * k / c.q;
  return s;
}

ChainDerivative rhs(const ChainState& s, const ChainParams& c) {
  ChainDerivative d{s.vel, std::vector<double>(s.pos.size())};
  Rk4(c).accel(s.pos, s.vel, d.acc);
  return d;
}

double max_time_step(const ChainParams& c) { return 0.1 / std::sqrt(std::max(1.0, c.eps + 4.0)); }

double chain_energy(const ChainState& s, const ChainParams& c) {
  const std::size_t n = s.pos.size();
  double e = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double right = k + 1 < n ? s.pos[k + 1] : s.pos[0] + kTwoPi * c.p;
    const double stretch = right - s.pos[k];
    e += 0.5 * s.vel[k] * s.vel[k] + 0.5 * stretch * stretch - c.eps * std::cos(s.pos[k]) - c.delta * s.pos[k];
  }
  return e;
}

IntegrationResult integrate(const ChainState& s0, const ChainParams& c, double dt, double t_end,
                            int decimation) {
  c.validate();
  check_dt(dt, c);
  if (s0.pos.size() != static_cast<std::size_t>(c.q) || s0.vel.size() != s0.pos.size())
    throw std::invalid_argument("integrate: state size does not match q");
  IntegrationResult res;
  const double span = t_end - s0.t;
  if (span < 0.0) throw std::invalid_argument("integrate: t_end before initial time");
  const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
  const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;

  std::vector<double> x = s0.pos;
  std::vector<double> v = s0.vel;
  Rk4 rk(c);
  if (decimation > 0) res.trajectory.push_back(s0);
  const bool track_energy = c.delta == 0.0;
  double energy = track_energy ? chain_energy(s0, c) : 0.0;
  for (long i = 1; i <= steps; ++i) {
    rk.step(x, v, h);
    const double t = s0.t + h * static_cast<double>(i);
    check_finite(x, t);
    if (track_energy) {
      const double e = chain_energy({t, x, v}, c);
      res.max_energy_increase = std::max(res.max_energy_increase, e - energy);
      energy = e;
    }
    if (decimation > 0 && (i % decimation == 0 || i == steps)) res.trajectory.push_back({t, x, v});
  }
  res.final = {s0.t + span, std::move(x), std::move(v)};
  return res;
}

const char* to_string(AttractorKind kind) {
  switch (kind) {
    case AttractorKind::equilibrium: return "equilibrium";
    case AttractorKind::traveling_wave: return "traveling_wave";
    case AttractorKind::undecided: return "undecided";
  }
  return "unknown";
}

AttractorReport classify_attractor(const ChainState& s0, const ChainParams& c, const AttractorOptions& opts) {
  c.validate();
  const double dt = opts.dt > 0.0 ? opts.dt : max_time_step(c);
  check_dt(dt, c);
  const auto q = static_cast<std::size_t>(c.q);
  Rk4 rk(c);
  std::vector<double> x = s0.pos;
  std::vector<double> v = s0.vel;
  long step_index = 0;
  const double t0 = s0.t;
  auto now = [&] { return t0 + dt * static_cast<double>(step_index); };
  double window = opts.window;

  AttractorReport rep;
  while (now() < t0 + opts.horizon) {
    const double length = std::min(window, t0 + opts.horizon - now());
    const auto n = std::max<long>(2, static_cast<long>(std::ceil(length / dt)));
    Window w(now(), dt, q);
    w.push(x, v);
    for (long i = 0; i < n; ++i) {
      rk.step(x, v, dt);
      ++step_index;
      check_finite(x, now());
      w.push(x, v);
    }
    rep.t_final = now();
    rep.final = {now(), x, v};

    if (max_abs(v) < opts.tau_eq) {
      rep.kind = AttractorKind::equilibrium;
      rep.mean_velocity = 0.0;
      return rep;
    }

    const double advance = w.mean_sample(w.size() - 1) - w.mean_sample(0);
    const double turn = kTwoPi * std::max(1, std::abs(c.p));
    if (std::abs(advance) >= 2.0 * turn) {
      if (const auto wave = check_wave(w, c, advance)) {
        rep.wave_period = wave->period;
        rep.delay_error = wave->delay_error;
        rep.periodicity_error = wave->periodicity_error;
        rep.mean_velocity = (c.p != 0 ? kTwoPi * c.p : kTwoPi * (advance > 0 ? 1.0 : -1.0)) / wave->period;
        if (wave->delay_error < opts.tau_wave && wave->periodicity_error < opts.tau_wave) {
          rep.kind = AttractorKind::traveling_wave;
          return rep;
        }
        window = std::max(window, 3.0 * std::abs(wave->period) + 10.0);
      }
    } else if (std::abs(advance) > 0.05 * turn) {
      // Slow drift: stretch the window so it covers a few turns.
      window = std::max(window, std::min(opts.horizon, 3.0 * turn / std::abs(advance) * length));
    }
  }
  rep.kind = AttractorKind::undecided;
  return rep;
}

bool settles_to_equilibrium(const ChainState& s0, const ChainParams& c, const AttractorOptions& opts) {
  c.validate();
  const double dt = opts.dt > 0.0 ? opts.dt : max_time_step(c);
  check_dt(dt, c);
  Rk4 rk(c);
  std::vector<double> x = s0.pos;
  std::vector<double> v = s0.vel;
  const double start = mean(x);
  const auto steps = static_cast<long>(std::ceil(opts.horizon / dt));
  for (long i = 1; i <= steps; ++i) {
    rk.step(x, v, dt);
    if (i % 64 == 0) {
      check_finite(x, s0.t + dt * static_cast<double>(i));
      if (std::abs(mean(x) - start) > kTwoPi) return false;
      if (max_abs(v) < opts.tau_eq) return true;
    }
  }
  return std::abs(mean(x) - start) <= kTwoPi;
}

double critical_torque(const ChainParams& c, double delta_lo, double delta_hi, double rel_tol,
                       const AttractorOptions& opts) {
  c.validate();
  if (!(delta_lo < delta_hi)) throw std::invalid_argument("critical_torque: need delta_lo < delta_hi");
  auto settles = [&](double d) {
    const ChainParams cd = c.with_delta(d);
    return settles_to_equilibrium(twist_state(cd), cd, opts);
  };
  if (!settles(delta_lo)) throw std::invalid_argument("critical_torque: no equilibrium at the lower bracket end");
  if (settles(delta_hi)) throw std::invalid_argument("critical_torque: chain still settles at the upper bracket end");
  double lo = delta_lo;
  double hi = delta_hi;
  while (hi - lo > rel_tol * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if (settles(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> refine_equilibrium(const std::vector<double>& pos, const ChainParams& c, double tol) {
  c.validate();
  const auto n = static_cast<Eigen::Index>(pos.size());
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(pos.data(), n);
  const double twist = kTwoPi * c.p;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd F(n);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double right = k + 1 < n ? x[k + 1] : x[0] + twist;
      const double left = k > 0 ? x[k - 1] : x[n - 1] - twist;
      F[k] = right - 2.0 * x[k] + left + c.delta - c.eps * std::sin(x[k]);
      J(k, (k + 1) % n) += 1.0;
      J(k, (k + n - 1) % n) += 1.0;
      J(k, k) += -2.0 - c.eps * std::cos(x[k]);
    }
    if (F.cwiseAbs().maxCoeff() < tol) break;
    x -= J.partialPivLu().solve(F);
  }
  return {x.data(), x.data() + n};
}

void write_trajectory_csv(std::ostream& out, const std::vector<ChainState>& traj) {
  if (traj.empty()) return;
  const std::size_t q = traj.front().pos.size();
  out << 't';
  for (std::size_t k = 0; k < q; ++k) out << ",x_" << k;
  for (std::size_t k = 0; k < q; ++k) out << ",v_" << k;
  out << '\n';
  std::ostringstream line;
  line << std::setprecision(15);
  for (const auto& s : traj) {
    line.str("");
    line << s.t;
    for (double x : s.pos) line << ',' << x;
    for (double v : s.vel) line << ',' << v;
    line << '\n';
    out << line.str();
  }
}

void to_json(nlohmann::json& j, const AttractorReport& r) {
  j = nlohmann::json{{"kind", to_string(r.kind)}, {"mean_velocity", r.mean_velocity}, {"t_final", r.t_final}};
  j["T"] = r.wave_period ? nlohmann::json(*r.wave_period) : nlohmann::json(nullptr);
  j["delay_error"] = r.delay_error ? nlohmann::json(*r.delay_error) : nlohmann::json(nullptr);
  j["periodicity_error"] = r.periodicity_error ? nlohmann::json(*r.periodicity_error) : nlohmann::json(nullptr);
}

}  // namespace atongue
