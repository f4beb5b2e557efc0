#include "atongue/orbits.hpp"

#include "atongue/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace atongue {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_inf(double a, double b) { return std::max(std::abs(a), std::abs(b)); }

bool finite(double a, double b) { return std::isfinite(a) && std::isfinite(b); }

// Solves J d = -F for a 2x2 system; false when singular.
bool newton_direction(const Mat2& J, double f0, double f1, double& d0, double& d1) {
  const double dt = det(J);
  if (std::abs(dt) < kSingularTolerance || !std::isfinite(dt)) return false;
  d0 = -(J[1][1] * f0 - J[0][1] * f1) / dt;
  d1 = -(-J[1][0] * f0 + J[0][0] * f1) / dt;
  return true;
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

const char* to_string(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::center: return "center";
    case OrbitKind::saddle: return "saddle";
    case OrbitKind::parabolic: return "parabolic";
  }
  return "unknown";
}

OrbitKind classify_trace(double trace, double tol) {
  const double t = std::abs(trace);
  if (t < 2.0 - tol) return OrbitKind::center;
  if (t > 2.0 + tol) return OrbitKind::saddle;
  return OrbitKind::parabolic;
}

OrbitKind classify(const PeriodicOrbit& orbit) { return classify_trace(orbit.trace); }

PeriodicOrbit make_orbit(const PhaseState& s0, const MapParams& m) {
  PeriodicOrbit orbit;
  orbit.params = m;
  orbit.states = iterate(s0, m, m.q);
  orbit.states.pop_back();
  orbit.residual = remainders_by_definition(s0, m, m.q);
  orbit.trace = trace(monodromy(s0, m, m.q));
  orbit.kind = classify_trace(orbit.trace);
  return orbit;
}

OrbitSearch solve_orbit_fixed_delta(const PhaseState& guess, const MapParams& m,
                                    const NewtonOptions& opts) {
  m.validate();
  OrbitSearch out;
  PhaseState u = guess;
  auto residual = [&](const PhaseState& s) { return remainders_by_definition(s, m, m.q); };
  RemainderPair F = residual(u);
  for (int it = 0; it <= opts.max_iterations; ++it) {
    out.iterations = it;
    if (!finite(F.R, F.S)) return out;
    if (norm_inf(F.R, F.S) < opts.tolerance) {
      out.status = OrbitStatus::converged;
      out.orbit = make_orbit(u, m);
      return out;
    }
    if (it == opts.max_iterations) break;
    Mat2 J = monodromy(u, m, m.q);
    J[0][0] -= 1.0;
    J[1][1] -= 1.0;
    double dx = 0.0;
    double dy = 0.0;
    if (!newton_direction(J, F.R, F.S, dx, dy)) {
      out.status = OrbitStatus::singular_jacobian;
      return out;
    }
    if (!finite(dx, dy) || norm_inf(dx, dy) > 1e6) return out;
    double lambda = 1.0;
    bool accepted = false;
    const double current = norm_inf(F.R, F.S);
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      const PhaseState trial{u.x + lambda * dx, u.y + lambda * dy};
      const RemainderPair Ft = residual(trial);
      if (finite(Ft.R, Ft.S) && norm_inf(Ft.R, Ft.S) < current) {
        u = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) return out;
  }
  return out;
}

std::vector<PeriodicOrbit> find_orbits(const MapParams& m, int x_grid,
                                       const std::vector<double>& y_guesses,
                                       const NewtonOptions& opts) {
  if (x_grid < 1) throw std::invalid_argument("find_orbits: x_grid must be >= 1");
  std::vector<PeriodicOrbit> found;
  std::vector<PhaseState> keys;
  for (int i = 0; i < x_grid; ++i) {
    for (double y : y_guesses) {
      const OrbitSearch s = solve_orbit_fixed_delta({kTwoPi * i / x_grid, y}, m, opts);
      if (s.status != OrbitStatus::converged) continue;
      const auto& states = s.orbit->states;
      const auto first = std::min_element(states.begin(), states.end(), [](const auto& a, const auto& b) {
        return wrap_angle(a.x) < wrap_angle(b.x);
      });
      const PhaseState key{wrap_angle(first->x), first->y};
      const bool duplicate = std::any_of(keys.begin(), keys.end(), [&](const PhaseState& k) {
        double dx = std::abs(k.x - key.x);
        dx = std::min(dx, kTwoPi - dx);
        return std::max(dx, std::abs(k.y - key.y)) < 1e-6;
      });
      if (duplicate) continue;
      keys.push_back(key);
      found.push_back(*s.orbit);
    }
  }
  return found;
}

Mat2 unperturbed_jacobian(int q) {
  const double qd = q;
  return Mat2{{{-qd * (qd + 1.0) / 2.0, qd}, {-qd, 0.0}}};
}

ImplicitSolution solve_delta_y(double x0, double eps, const MapParams& m,
                               std::optional<DeltaYSeed> seed, const NewtonOptions& opts) {
  m.validate();
  ImplicitSolution out;
  out.x0 = x0;
  out.eps = eps;
  const bool have_seed = seed.has_value();
  double delta = have_seed ? seed->delta : 0.0;
  double y0 = have_seed ? seed->y0 : 0.0;

  auto residual = [&](double d, double y) { return remainders({x0, y}, m.with(eps, d), m.q); };

  RemainderPair F = residual(delta, y0);
  for (int it = 0; it <= opts.max_iterations; ++it) {
    out.iterations = it;
    out.delta = delta;
    out.y0 = y0;
    if (!finite(F.R, F.S)) return out;
    if (norm_inf(F.R, F.S) < opts.tolerance) {
      out.converged = true;
      return out;
    }
    if (it == opts.max_iterations) break;

    Mat2 J;
    if (it == 0 && !have_seed) {
      J = unperturbed_jacobian(m.q);
    } else {
      const double hd = std::max(1e-7, 1e-7 * std::abs(delta));
      const double hy = std::max(1e-7, 1e-7 * std::abs(y0));
      const RemainderPair dp = residual(delta + hd, y0);
      const RemainderPair dm = residual(delta - hd, y0);
      const RemainderPair yp = residual(delta, y0 + hy);
      const RemainderPair ym = residual(delta, y0 - hy);
      J = Mat2{{{(dp.R - dm.R) / (2 * hd), (yp.R - ym.R) / (2 * hy)},
                {(dp.S - dm.S) / (2 * hd), (yp.S - ym.S) / (2 * hy)}}};
    }
    double dd = 0.0;
    double dy = 0.0;
    if (!newton_direction(J, F.R, F.S, dd, dy) || !finite(dd, dy)) return out;

    const double current = norm_inf(F.R, F.S);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, lambda *= 0.5) {
      const double nd = delta + lambda * dd;
      const double ny = y0 + lambda * dy;
      const RemainderPair Ft = residual(nd, ny);
      if (finite(Ft.R, Ft.S) && norm_inf(Ft.R, Ft.S) < current) {
        delta = nd;
        y0 = ny;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) return out;
  }
  return out;
}

ImplicitSolution solve_delta_y_homotopy(double x0, double eps, const MapParams& m,
                                        const NewtonOptions& opts) {
  ImplicitSolution current{x0, 0.0, 0.0, 0.0, true, 0};
  if (eps == 0.0) return solve_delta_y(x0, 0.0, m, DeltaYSeed{}, opts);
  double h = eps / 4.0;
  const double h_min = std::abs(eps) * 1e-6;
  int total_iterations = 0;
  while (current.eps != eps) {
    const double target = std::abs(eps - current.eps) <= std::abs(h) ? eps : current.eps + h;
    const ImplicitSolution trial =
        solve_delta_y(x0, target, m, DeltaYSeed{current.delta, current.y0}, opts);
    total_iterations += trial.iterations;
    if (trial.converged && trial.iterations <= kContinuationMaxIterations) {
      current = trial;
      h *= 1.5;
    } else {
      h *= 0.5;
      if (std::abs(h) < h_min) {
        ImplicitSolution failed = trial;
        failed.converged = false;
        return failed;
      }
    }
  }
  current.iterations = total_iterations;
  return current;
}

DeltaProfile continue_in_x(double eps, const MapParams& m, int grid_size,
                           const ContinuationOptions& opts) {
  m.validate();
  if (grid_size < 8 * m.q) {
    throw std::invalid_argument("continue_in_x: grid_size must be >= 8 q (got " +
                                std::to_string(grid_size) + ")");
  }
  DeltaProfile profile;
  profile.points.resize(static_cast<std::size_t>(grid_size));
  auto x_at = [&](std::size_t i) { return kTwoPi * static_cast<double>(i) / grid_size; };
  auto fail = [&](double x0) {
    throw ContinuationError("implicit solve failed at x0 = " + std::to_string(x0) +
                                ", eps = " + std::to_string(eps),
                            x0, eps);
  };
  auto accepted = [](const ImplicitSolution& s) {
    return s.converged && s.iterations <= kContinuationMaxIterations;
  };

  if (opts.mode == SeedMode::independent) {
    parallel_for(profile.points.size(), opts.jobs, [&](std::size_t i) {
      const ImplicitSolution s = solve_delta_y_homotopy(x_at(i), eps, m, opts.newton);
      if (!s.converged) fail(x_at(i));
      profile.points[i] = s;
    });
  } else {
    ImplicitSolution first;
    if (opts.seed) first = solve_delta_y(0.0, eps, m, opts.seed, opts.newton);
    if (!accepted(first)) first = solve_delta_y_homotopy(0.0, eps, m, opts.newton);
    if (!first.converged) fail(0.0);
    profile.points[0] = first;
    for (std::size_t i = 1; i < profile.points.size(); ++i) {
      const auto& prev = profile.points[i - 1];
      const ImplicitSolution s =
          solve_delta_y(x_at(i), eps, m, DeltaYSeed{prev.delta, prev.y0}, opts.newton);
      if (!accepted(s)) fail(x_at(i));
      profile.points[i] = s;
    }
  }

  const auto& last = profile.points.back();
  const ImplicitSolution wrap =
      solve_delta_y(kTwoPi, eps, m, DeltaYSeed{last.delta, last.y0}, opts.newton);
  if (!wrap.converged) fail(kTwoPi);
  profile.seam_mismatch = std::abs(wrap.delta - profile.points.front().delta);
  return profile;
}

}  // namespace atongue
