#include "support.hpp"

#include "atongue/cylmap.hpp"
#include "atongue/sgchain.hpp"
#include "atongue/tongue.hpp"

#include <boost/numeric/odeint.hpp>
#include <doctest.h>

#include <complex>
#include <sstream>

using namespace atongue;
using testing::Gen;
using testing::kTwoPi;

namespace {

// Potential energy written independently of the library, generic in the scalar type.
template <class T>
T potential(const std::vector<T>& x, const ChainParams& c) {
  T u = 0.0;
  const auto q = x.size();
  for (std::size_t k = 0; k < q; ++k) {
    const T next = k + 1 < q ? x[k + 1] : x[0] + kTwoPi * c.p;
    u += 0.5 * (next - x[k]) * (next - x[k]) - c.eps * std::cos(x[k]) - c.delta * x[k];
  }
  return u;
}

ChainParams chain(int q, int p, double eps, double delta) {
  ChainParams c;
  c.q = q;
  c.p = p;
  c.eps = eps;
  c.delta = delta;
  return c;
}

}  // namespace

TEST_CASE("validation and the twist state") {
  CHECK_THROWS_AS(chain(1, 0, 0.1, 0.0).validate(), std::invalid_argument);
  ChainParams c = chain(3, 1, 0.1, 0.0);
  c.gamma = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  const ChainState s = twist_state(chain(4, 1, 0.1, 0.0));
  REQUIRE(s.pos.size() == 4);
  CHECK(s.pos[2] == doctest::Approx(kTwoPi / 2));
  CHECK(s.vel == std::vector<double>(4, 0.0));
  CHECK(max_time_step(chain(4, 1, 0.0, 0.0)) == doctest::Approx(0.05));
}

TEST_CASE("accelerations are minus the complex-step gradient of the potential") {
  Gen gen(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int q = gen.integer(2, 8);
    ChainParams c = chain(q, gen.integer(-2, 2), gen.uniform(0, 1), gen.uniform(-0.2, 0.2));
    c.gamma = gen.uniform(0.1, 1.0);
    ChainState s;
    for (int k = 0; k < q; ++k) {
      s.pos.push_back(gen.uniform(-4, 4));
      s.vel.push_back(gen.uniform(-1, 1));
    }
    const ChainDerivative d = rhs(s, c);
    constexpr double h = 1e-30;
    for (int k = 0; k < q; ++k) {
      std::vector<std::complex<double>> z(s.pos.begin(), s.pos.end());
      z[static_cast<std::size_t>(k)] += std::complex<double>(0.0, h);
      const double grad = potential(z, c).imag() / h;
      const auto i = static_cast<std::size_t>(k);
      CHECK(d.acc[i] == doctest::Approx(-c.gamma * s.vel[i] - grad).epsilon(1e-13).scale(1.0));
      CHECK(d.vel[i] == s.vel[i]);
    }
    std::vector<double> x = s.pos;
    double kinetic = 0.0;
    for (double v : s.vel) kinetic += 0.5 * v * v;
    CHECK(chain_energy(s, c) == doctest::Approx(kinetic + potential(x, c)).epsilon(1e-13));
  }
}

TEST_CASE("synchronous q = 2 chain reduces to a damped driven pendulum") {
  const ChainParams c = chain(2, 0, 0.6, 0.1);
  ChainState s0;
  s0.pos = {0.5, 0.5};
  s0.vel = {0.2, 0.2};
  const IntegrationResult res = integrate(s0, c, 0.01, 20.0);

  using State = std::array<double, 2>;
  State y{0.5, 0.2};
  auto pendulum = [&](const State& u, State& du, double) {
    du[0] = u[1];
    du[1] = -c.gamma * u[1] - c.eps * std::sin(u[0]) + c.delta;
  };
  namespace odeint = boost::numeric::odeint;
  odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13), pendulum, y,
                             0.0, 20.0, 1e-3);
  CHECK(res.final.t == doctest::Approx(20.0));
  CHECK(res.final.pos[0] == doctest::Approx(y[0]).epsilon(1e-8));
  CHECK(res.final.pos[1] == doctest::Approx(y[0]).epsilon(1e-8));
  CHECK(res.final.vel[0] == doctest::Approx(y[1]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("integrate: step limit, decimation and energy decay without torque") {
  const ChainParams c = chain(4, 1, 0.5, 0.0);
  ChainState s = twist_state(c);
  s.vel = {0.3, -0.2, 0.5, 0.1};
  CHECK_THROWS_AS(integrate(s, c, 1.0, 10.0), std::invalid_argument);
  const IntegrationResult res = integrate(s, c, 0.02, 50.0, 10);
  CHECK(res.trajectory.size() == 251);
  CHECK(res.trajectory.front().t == 0.0);
  CHECK(res.max_energy_increase < 1e-12);
  CHECK(chain_energy(res.final, c) < chain_energy(s, c));
}

TEST_CASE("synchronous chain: critical torque equals eps") {
  const ChainParams c = chain(2, 0, 0.3, 0.0);
  CHECK(critical_torque(c, 0.2, 0.4, 1e-7) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("critical torque matches the map tongue edge") {
  const ChainParams c = chain(3, 1, 0.3, 0.0);
  MapParams m;
  m.p = 1;
  m.q = 3;
  const double map_edge = width_at(m, 0.3).delta_max;
  const double crit = critical_torque(c, 0.5 * map_edge, 2.0 * map_edge);
  CHECK(std::abs(crit - map_edge) < 1e-4);
  CHECK(std::abs(crit - map_edge) < 2e-3 * map_edge);
  CHECK_THROWS_AS(critical_torque(c, 2.0 * map_edge, 3.0 * map_edge), std::invalid_argument);
  CHECK_THROWS_AS(critical_torque(c, 0.1 * map_edge, 0.2 * map_edge), std::invalid_argument);
}

TEST_CASE("chain equilibria are periodic orbits of the map") {
  const ChainParams c = chain(3, 1, 0.3, 0.0005);
  const AttractorReport rep = classify_attractor(twist_state(c), c);
  REQUIRE(rep.kind == AttractorKind::equilibrium);
  const std::vector<double> x = refine_equilibrium(rep.final.pos, c);
  MapParams m;
  m.p = 1;
  m.q = 3;
  m.eps = c.eps;
  m.delta = c.delta;
  const double v0 = x[0] - (x[2] - kTwoPi);
  const PhaseState start{x[0] + std::numbers::pi, v0 - m.mu()};
  const RemainderPair r = remainders(start, m, 3);
  CHECK(std::abs(r.R) < 1e-8);
  CHECK(std::abs(r.S) < 1e-8);
  const auto pts = iterate(start, m, 3);
  CHECK(pts[1].x == doctest::Approx(x[1] + std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("above the edge the chain runs as a traveling wave") {
  const ChainParams c = chain(3, 1, 0.3, 0.003);
  const AttractorReport rep = classify_attractor(twist_state(c), c);
  REQUIRE(rep.kind == AttractorKind::traveling_wave);
  REQUIRE(rep.wave_period.has_value());
  CHECK(*rep.delay_error < kWaveTolerance);
  CHECK(*rep.periodicity_error < kWaveTolerance);
  CHECK(rep.mean_velocity * *rep.wave_period == doctest::Approx(kTwoPi).epsilon(1e-3));
  const nlohmann::json j = rep;
  CHECK(j.at("kind") == "traveling_wave");
  CHECK(j.contains("T"));
  CHECK(j.contains("delay_error"));
}

TEST_CASE("trajectory CSV layout") {
  const ChainParams c = chain(2, 0, 0.1, 0.0);
  const IntegrationResult res = integrate(twist_state(c), c, 0.04, 0.24, 2);
  std::ostringstream out;
  write_trajectory_csv(out, res.trajectory);
  const std::string text = out.str();
  CHECK(text.rfind("t,x_0,x_1,v_0,v_1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(res.trajectory.size()));
}

TEST_CASE("worked examples: rhs and integration") {
  ChainParams sag = chain(3, 0, 0.4, 0.1);
  ChainState s;
  s.pos.assign(3, std::asin(0.1 / 0.4));
  s.vel.assign(3, 0.0);
  for (double a : rhs(s, sag).acc) CHECK(std::abs(a) < 1e-16);
  const IntegrationResult still = integrate(s, sag, 0.04, 40.0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(still.final.pos[k] - s.pos[k]) < 1e-9);

  const ChainParams free = chain(5, 2, 0.0, 0.0);
  for (double a : rhs(twist_state(free), free).acc) CHECK(std::abs(a) < 1e-14);

  // Symmetric push on the q = 2 synchronous chain decays back to rest.
  const ChainParams pend = chain(2, 0, 0.3, 0.0);
  ChainState push = twist_state(pend);
  push.vel = {0.1, 0.1};
  const IntegrationResult r = integrate(push, pend, 0.04, 200.0);
  CHECK(std::abs(r.final.pos[0]) < 1e-6);
  CHECK(r.final.pos[0] == doctest::Approx(r.final.pos[1]).epsilon(1e-12));
}

TEST_CASE("worked examples: attractors") {
  const ChainParams c = chain(4, 1, 0.3, 0.0);
  ChainState s = twist_state(c);
  Gen gen(52);
  for (auto& x : s.pos) x += gen.uniform(-0.05, 0.05);
  CHECK(classify_attractor(s, c).kind == AttractorKind::equilibrium);

  const ChainParams strong = chain(3, 1, 0.3, 5.0);
  const AttractorReport w = classify_attractor(twist_state(strong), strong);
  CHECK(w.kind == AttractorKind::traveling_wave);
  CHECK(w.mean_velocity == doctest::Approx(strong.delta / strong.gamma).epsilon(1e-2));
}

TEST_CASE("property: attractor dichotomy at gamma = 0.5") {
  Gen gen(53);
  for (int trial = 0; trial < 6; ++trial) {
    const int q = gen.integer(2, 5);
    const ChainParams c = chain(q, gen.integer(0, q - 1), gen.uniform(0.05, 0.5), gen.uniform(0.0, 0.05));
    const AttractorReport r = classify_attractor(twist_state(c), c);
    INFO("q=", c.q, " p=", c.p, " eps=", c.eps, " delta=", c.delta);
    CHECK(r.kind != AttractorKind::undecided);
  }
}
