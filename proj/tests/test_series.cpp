#include "support.hpp"

#include "atongue/orbits.hpp"
#include "atongue/series.hpp"

#include <doctest.h>

#include <numbers>

using namespace atongue;
using testing::Gen;
using testing::kTwoPi;

namespace {

MapParams sin_map(int p, int q) {
  MapParams m;
  m.p = p;
  m.q = q;
  return m;
}

}  // namespace

TEST_CASE("EpsSeries arithmetic") {
  EpsSeries a(2);
  a[0] = TrigPoly::constant(1.0);
  a[1] = TrigPoly::harmonic(1, 0.0, 1.0);
  EpsSeries b(2);
  b[0] = TrigPoly::constant(2.0);
  b[2] = TrigPoly::harmonic(1, 1.0, 0.0);
  const EpsSeries ab = multiply(a, b, 16);
  for (double x : {0.3, 2.0}) {
    for (double eps : {0.01, 0.1}) {
      // Truncated product agrees with the exact product up to eps^3 terms.
      const double exact = eval_series(a, x, eps) * eval_series(b, x, eps);
      CHECK(std::abs(eval_series(ab, x, eps) - exact) < 4 * eps * eps * eps);
    }
  }
  CHECK(eval_series(a + b, 0.5, 0.2) == doctest::Approx(eval_series(a, 0.5, 0.2) + eval_series(b, 0.5, 0.2)));
  CHECK(eval_series(a - b, 0.5, 0.2) == doctest::Approx(eval_series(a, 0.5, 0.2) - eval_series(b, 0.5, 0.2)));
  CHECK(eval_series(-a, 0.5, 0.2) == doctest::Approx(-eval_series(a, 0.5, 0.2)));
  const EpsSeries shifted = a.times_eps();
  CHECK(shifted.order() == 3);
  CHECK(max_coeff_diff(shifted[1], a[0]) == 0.0);
  CHECK(max_coeff_diff(shifted[2], a[1]) == 0.0);
  CHECK(a.truncated(5).order() == 5);
  const EpsSeries sc = a.scaled(TrigPoly::constant(3.0), 16);
  CHECK(eval_series(sc, 1.0, 0.1) == doctest::Approx(3 * eval_series(a, 1.0, 0.1)));
}

TEST_CASE("q = 1, f = sin: Delta = -eps sin x exactly") {
  const SeriesSolution s = expand(sin_map(0, 1), 5);
  CHECK(max_coeff_diff(s.delta[1], TrigPoly::harmonic(1, 0.0, -1.0)) < 1e-14);
  for (int n = 2; n <= 5; ++n) CHECK(s.delta[n].norm() < 1e-14);
  for (int n = 0; n <= 5; ++n) CHECK(s.y[n].norm() < 1e-14);
  REQUIRE(s.r.has_value());
  CHECK(*s.r == 1);
  CHECK(predicted_width(s, 0.3) == doctest::Approx(0.6));
}

TEST_CASE("first-order coefficients from shift averages of random f") {
  Gen gen(41);
  for (auto [p, q] : {std::pair{1, 2}, {2, 3}, {2, 5}}) {
    for (int trial = 0; trial < 10; ++trial) {
      MapParams m = sin_map(p, q);
      m.f = gen.trigpoly(gen.integer(1, 4));
      const SeriesSolution s = expand(m, 2);
      // Independent evaluation of the averages at sample points.
      for (double x : testing::grid(8)) {
        double fbar = 0.0;
        double fbarbar = 0.0;
        for (int k = 0; k < q; ++k) {
          fbar += testing::naive_eval(m.f, x + k * m.mu()) / q;
          fbarbar += (q - k) * testing::naive_eval(m.f, x + k * m.mu()) / q;
        }
        CHECK(s.delta[1].eval(x) == doctest::Approx(-fbar).scale(1.0).epsilon(1e-12));
        CHECK(s.y[1].eval(x) == doctest::Approx(-(q + 1) / 2.0 * fbar + fbarbar).scale(1.0).epsilon(1e-12));
      }
      CHECK(verify_first_order(s, m).max_error() < 1e-12);
    }
  }
}

TEST_CASE("series agrees with Newton to the truncation order") {
  for (int q : {2, 3, 4}) {
    const MapParams m = sin_map(1, q);
    const SeriesSolution s = expand(m, 5);
    for (double x0 : {0.3, 2.2}) {
      double prev = 0.0;
      for (double eps : {0.08, 0.04}) {
        const ImplicitSolution num = solve_delta_y_homotopy(x0, eps, m);
        REQUIRE(num.converged);
        const double err = std::abs(num.delta - eval_series(s.delta, x0, eps));
        CHECK(err < 50 * std::pow(eps, 6) + 1e-13);
        CHECK(std::abs(num.y0 - eval_series(s.y, x0, eps)) < 50 * std::pow(eps, 6) + 1e-13);
        prev = err;
      }
      (void)prev;
    }
  }
}

TEST_CASE("f = sin: leading index r = q with a pure q-th harmonic") {
  for (int q = 2; q <= 5; ++q) {
    const MapParams m = sin_map(1, q);
    const SeriesSolution s = expand(m, q);
    REQUIRE(s.r.has_value());
    CHECK(*s.r == q);
    CHECK(s.A.size() == static_cast<std::size_t>(q));
    const PeriodicityReport rep = verify_periodicity(s, m);
    CHECK(rep.passes);
    CHECK(rep.support == std::vector<int>{q});
    for (int n = 0; n <= s.order; ++n) CHECK(s.delta[n].degree() <= n);
  }
  // Known low-order values.
  CHECK(expand(sin_map(1, 2), 2).delta[2].sin_coeff(2) == doctest::Approx(-0.125));
  CHECK(expand(sin_map(1, 3), 3).delta[3].sin_coeff(3) == doctest::Approx(-1.0 / 24.0));
}

TEST_CASE("f = sin 2x, q = 4: r = 2") {
  MapParams m = sin_map(1, 4);
  m.f = TrigPoly::harmonic(2, 0.0, 1.0);
  const SeriesSolution s = expand(m, 3);
  REQUIRE(s.r.has_value());
  CHECK(*s.r == 2);
  CHECK(*s.r * 2 >= m.q);
  CHECK(verify_periodicity(s, m).passes);
}

TEST_CASE("constant forcing has no x-dependent coefficient") {
  MapParams m = sin_map(1, 3);
  m.f = TrigPoly::constant(1.0);
  const SeriesSolution s = expand(m, 3);
  CHECK_FALSE(s.r.has_value());
  CHECK(s.delta[1].cos_coeff(0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(verify_periodicity(s, m), std::logic_error);
  CHECK_THROWS_AS(predicted_width(s, 0.1), std::logic_error);
  const nlohmann::json j = s;
  CHECK(j.at("r").is_null());
}

TEST_CASE("structural constancy tolerance") {
  CHECK(is_structurally_constant(TrigPoly({1.0, 1e-12}, {})));
  CHECK_FALSE(is_structurally_constant(TrigPoly({1.0, 1e-6}, {})));
}

TEST_CASE("expand rejects bad inputs") {
  CHECK_THROWS_AS(expand(sin_map(2, 4), 3), std::invalid_argument);
  MapParams m = sin_map(1, 3);
  m.f = TrigPoly::harmonic(3, 1.0, 0.0);
  CHECK_THROWS_AS(expand(m, 4, 8), CapacityError);
}

TEST_CASE("series JSON layout") {
  const SeriesSolution s = expand(sin_map(1, 2), 4);
  const nlohmann::json j = s;
  CHECK(j.at("q") == 2);
  CHECK(j.at("p") == 1);
  CHECK(j.at("N") == 4);
  CHECK(j.at("r") == 2);
  CHECK(j.at("Delta").size() == 5);
  CHECK(j.at("Y").size() == 5);
  CHECK(j.at("A").size() == 2);
}

TEST_CASE("worked examples") {
  const double pi = std::numbers::pi;
  CHECK(eval_series(EpsSeries(3), 1.0, 0.5) == 0.0);
  EpsSeries one(1);
  one[1] = TrigPoly::harmonic(1, 0.0, -1.0);
  CHECK(eval_series(one, pi / 2, 0.1) == doctest::Approx(-0.1));

  const MapParams s3 = sin_map(1, 3);
  CHECK(verify_first_order(expand(s3, 2), s3).max_error() < 1e-12);
  MapParams t3 = sin_map(1, 3);
  t3.f = TrigPoly::harmonic(3, 0.0, 1.0);
  const SeriesSolution st = expand(t3, 2);
  CHECK(verify_first_order(st, t3).max_error() < 1e-12);
  CHECK(max_coeff_diff(st.delta[1], TrigPoly::harmonic(3, 0.0, -1.0)) < 1e-12);

  for (int q : {2, 3}) {
    const SeriesSolution s = expand(sin_map(1, q), q);
    for (int k : verify_periodicity(s, sin_map(1, q)).support) CHECK((k == 0 || k == q));
  }
  CHECK(predicted_width(expand(sin_map(0, 1), 2), 0.1) == doctest::Approx(0.2));
}
