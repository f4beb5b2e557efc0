#pragma once

#include "atongue/cylmap.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace atongue {

inline constexpr double kNewtonTolerance = 1e-12;
inline constexpr double kClassifyTolerance = 1e-8;
inline constexpr double kSingularTolerance = 1e-14;
/// Continuation accepts a grid point only if Newton converges in this many steps.
inline constexpr int kContinuationMaxIterations = 12;

enum class OrbitKind { center, saddle, parabolic };

const char* to_string(OrbitKind kind);

struct NewtonOptions {
  double tolerance = kNewtonTolerance;
  int max_iterations = 50;
  int max_halvings = 20;
};

struct PeriodicOrbit {
  std::vector<PhaseState> states;  // q points, lifted
  MapParams params;
  RemainderPair residual;
  OrbitKind kind = OrbitKind::parabolic;
  double trace = 2.0;  // of the q-step monodromy
};

enum class OrbitStatus { converged, not_found, singular_jacobian };

struct OrbitSearch {
  OrbitStatus status = OrbitStatus::not_found;
  std::optional<PeriodicOrbit> orbit;
  int iterations = 0;
};

/// Damped Newton on (x_q - x_0 - 2 pi p, y_q - y_0) = 0 at fixed delta.
OrbitSearch solve_orbit_fixed_delta(const PhaseState& guess, const MapParams& m,
                                    const NewtonOptions& opts = {});

/// Trace rule: |t| < 2 - tol -> center, |t| > 2 + tol -> saddle, else parabolic.
OrbitKind classify_trace(double trace, double tol = kClassifyTolerance);
OrbitKind classify(const PeriodicOrbit& orbit);

/// Assembles a PeriodicOrbit (states, residual, trace, kind) through s0.
PeriodicOrbit make_orbit(const PhaseState& s0, const MapParams& m);

/// Multistart fixed-delta search over an x0 grid and a list of y0 guesses.
/// Orbits are deduplicated after rotating each to the point with the
/// smallest x mod 2pi; two orbits match when those points are within 1e-6.
std::vector<PeriodicOrbit> find_orbits(const MapParams& m, int x_grid,
                                       const std::vector<double>& y_guesses = {0.0},
                                       const NewtonOptions& opts = {});

/// delta = Delta(x0, eps), y0 = Y(x0, eps)
struct ImplicitSolution {
  double x0 = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double y0 = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct DeltaYSeed {
  double delta = 0.0;
  double y0 = 0.0;
};

/// d(R, S)/d(delta, y0) at eps = 0: [[-q(q+1)/2, q], [-q, 0]].
Mat2 unperturbed_jacobian(int q);

/// Newton in (delta, y0) on (qR, qS)(x0, y0, eps, delta) = 0 with f, p, q
/// taken from `m`. Without a seed the first step uses the unperturbed
/// Jacobian; every other step uses central differences.
ImplicitSolution solve_delta_y(double x0, double eps, const MapParams& m,
                               std::optional<DeltaYSeed> seed = std::nullopt,
                               const NewtonOptions& opts = {});

/// Ramps eps from 0 in sub-steps (halved on failure) to reach (x0, eps).
ImplicitSolution solve_delta_y_homotopy(double x0, double eps, const MapParams& m,
                                        const NewtonOptions& opts = {});

/// Thrown when a sweep cannot converge at some x0.
class ContinuationError : public std::runtime_error {
 public:
  ContinuationError(const std::string& what, double x0, double eps)
      : std::runtime_error(what), x0_(x0), eps_(eps) {}
  double x0() const { return x0_; }
  double eps() const { return eps_; }

 private:
  double x0_;
  double eps_;
};

enum class SeedMode {
  continuation,  // each point seeded from its predecessor, sequential
  independent    // each point from an eps homotopy, may run in parallel
};

struct ContinuationOptions {
  SeedMode mode = SeedMode::continuation;
  int jobs = 1;
  std::optional<DeltaYSeed> seed;  // for x0 = 0, e.g. from a previous eps
  NewtonOptions newton{};
};

struct DeltaProfile {
  std::vector<ImplicitSolution> points;  // x0 = 2 pi i / grid_size
  double seam_mismatch = 0.0;            // |Delta(0) - Delta(2 pi)|
};

/// Sweeps x0 over [0, 2pi). Requires grid_size >= 8 q.
DeltaProfile continue_in_x(double eps, const MapParams& m, int grid_size,
                           const ContinuationOptions& opts = {});

}  // namespace atongue
