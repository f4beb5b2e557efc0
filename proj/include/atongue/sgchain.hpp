#pragma once

#include <json.hpp>

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace atongue {

/// Damped, torqued sine-Gordon chain with a twisted periodic boundary:
///
///   x_k'' + gamma x_k' + eps sin x_k = x_{k+1} - 2 x_k + x_{k-1} + delta,
///   x_{k+q} = x_k + 2 pi p.
struct ChainParams {
  int q = 2;
  int p = 0;
  double gamma = 0.5;
  double eps = 0.0;
  double delta = 0.0;

  void validate() const;
  ChainParams with_delta(double d) const {
    ChainParams c = *this;
    c.delta = d;
    return c;
  }
};

struct ChainState {
  double t = 0.0;
  std::vector<double> pos;
  std::vector<double> vel;
};

struct ChainDerivative {
  std::vector<double> vel;
  std::vector<double> acc;
};

inline constexpr double kEquilibriumTolerance = 1e-8;
inline constexpr double kWaveTolerance = 1e-4;
inline constexpr double kDefaultHorizon = 1e5;

/// pos_k = 2 pi p k / q, vel = 0.
ChainState twist_state(const ChainParams& c);

ChainDerivative rhs(const ChainState& s, const ChainParams& c);

/// Largest step accepted by integrate(): 0.1 / sqrt(max(1, eps + 4)).
double max_time_step(const ChainParams& c);

/// sum v^2/2 + sum (x_{k+1}-x_k)^2/2 - eps cos x_k - delta x_k
double chain_energy(const ChainState& s, const ChainParams& c);

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrationResult {
  ChainState final;
  std::vector<ChainState> trajectory;  // every `decimation`-th step, including t0
  double max_energy_increase = 0.0;    // largest per-step rise, tracked when delta == 0
};

/// Fixed-step classical RK4. decimation == 0 records no trajectory.
IntegrationResult integrate(const ChainState& s0, const ChainParams& c, double dt, double t_end,
                            int decimation = 0);

enum class AttractorKind { equilibrium, traveling_wave, undecided };

const char* to_string(AttractorKind kind);

struct AttractorReport {
  AttractorKind kind = AttractorKind::undecided;
  double mean_velocity = 0.0;
  std::optional<double> wave_period;
  std::optional<double> delay_error;        // max |x_k(t) - x_{k-1}(t + T/q)|
  std::optional<double> periodicity_error;  // max |x_k(t + T) - x_k(t) - 2 pi p|
  double t_final = 0.0;
  ChainState final;
};

struct AttractorOptions {
  double dt = 0.0;  // 0 picks max_time_step
  double horizon = kDefaultHorizon;
  double window = 200.0;  // initial analysis window, grows to cover 3 periods
  double tau_eq = kEquilibriumTolerance;
  double tau_wave = kWaveTolerance;
};

/// Integrates window by window until the state is an equilibrium
/// (max |v| < tau_eq), a verified traveling wave, or the horizon is reached.
AttractorReport classify_attractor(const ChainState& s0, const ChainParams& c,
                                   const AttractorOptions& opts = {});

/// True when the chain settles without any pendulum slipping: a run that
/// drifts the mean angle by more than 2 pi counts as moving. Undecided runs
/// without slip count as settling.
bool settles_to_equilibrium(const ChainState& s0, const ChainParams& c,
                            const AttractorOptions& opts = {});

/// Bisection in delta on settles_to_equilibrium, starting each run from the
/// twist state, until (hi - lo) <= rel_tol * hi. Throws std::invalid_argument
/// when the bracket does not straddle the transition.
double critical_torque(const ChainParams& c, double delta_lo, double delta_hi,
                       double rel_tol = 1e-3, const AttractorOptions& opts = {});

/// Newton polish of an approximate equilibrium on the static equations.
std::vector<double> refine_equilibrium(const std::vector<double>& pos, const ChainParams& c,
                                       double tol = 1e-13);

/// Header "t,x_0..x_{q-1},v_0..v_{q-1}".
void write_trajectory_csv(std::ostream& out, const std::vector<ChainState>& traj);

void to_json(nlohmann::json& j, const AttractorReport& r);

}  // namespace atongue
