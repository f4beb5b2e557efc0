#pragma once

#include "atongue/orbits.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace atongue {

/// One eps-slice of an Arnold tongue: the range of Delta(., eps).
struct TongueSample {
  double eps = 0.0;
  double width = 0.0;
  double delta_max = 0.0;
  double delta_min = 0.0;
  double x_argmax = 0.0;
  double x_argmin = 0.0;
};

struct TongueOptions {
  int grid = 0;  // 0 picks max(64, 16 q)
  ContinuationOptions continuation{};
};

int default_grid(int q);

/// Width of the p/q tongue at `eps` (m.delta is ignored). Samples Delta on
/// the x0 grid, then refines both extrema with Brent's parabolic search on
/// re-solved Delta values. Throws ContinuationError on failure.
TongueSample width_at(const MapParams& m, double eps, const TongueOptions& opts = {});

/// Same, reusing an already computed profile.
TongueSample width_from_profile(const MapParams& m, double eps, const DeltaProfile& profile,
                                const NewtonOptions& newton = {});

struct SweepEntry {
  double eps = 0.0;
  std::optional<TongueSample> sample;
  std::string error;  // set when sample is empty
};

/// One sample per eps (ascending). With jobs == 1 every eps is seeded from
/// the previous one; with jobs > 1 the samples run in parallel from scratch.
std::vector<SweepEntry> sweep(const MapParams& m, const std::vector<double>& eps_list,
                              const TongueOptions& opts = {}, int jobs = 1);

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log(width) = log_prefactor + exponent log(eps).
struct ScalingFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double residual = 0.0;  // max |log deviation|
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  int samples = 0;
};

/// Least squares in log-log. Uses samples with width > 1e3 * kNewtonTolerance;
/// throws InsufficientDataError with fewer than 5.
ScalingFit fit_exponent(const std::vector<TongueSample>& samples);

struct SaddleNodeLocus {
  double delta_plus = 0.0;
  double delta_minus = 0.0;
  double x_plus = 0.0;
  double x_minus = 0.0;
  double y_plus = 0.0;
  double y_minus = 0.0;
  double trace_plus = 0.0;  // monodromy trace of the orbit at the merge
  double trace_minus = 0.0;
};

/// Drifts where the center/saddle pair merges: the extrema of Delta.
SaddleNodeLocus saddle_node_locus(const MapParams& m, double eps, const TongueOptions& opts = {});

/// Header "eps,width,delta_max,delta_min,x_argmax,x_argmin"; failed samples
/// are skipped.
void write_tongue_csv(std::ostream& out, const std::vector<TongueSample>& samples);
std::vector<TongueSample> read_tongue_csv(std::istream& in);

void to_json(nlohmann::json& j, const TongueSample& s);
void to_json(nlohmann::json& j, const ScalingFit& f);

}  // namespace atongue
