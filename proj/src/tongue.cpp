#include "atongue/tongue.hpp"

#include "atongue/parallel.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace atongue {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Refined {
  double x;
  double value;
};

// Extremum of Delta near grid point i of the profile; sign = +1 for max.
Refined refine_extremum(const MapParams& m, double eps, const DeltaProfile& profile, std::size_t i,
                        double sign, const NewtonOptions& newton) {
  const auto n = profile.points.size();
  const double h = kTwoPi / static_cast<double>(n);
  const ImplicitSolution& centre = profile.points[i];
  auto objective = [&](double x) {
    const ImplicitSolution s = solve_delta_y(x, eps, m, DeltaYSeed{centre.delta, centre.y0}, newton);
    if (!s.converged) return std::numeric_limits<double>::infinity();
    return -sign * s.delta;
  };
  std::uintmax_t max_iter = 100;
  const auto [x, v] = boost::math::tools::brent_find_minima(objective, centre.x0 - h, centre.x0 + h,
                                                            std::numeric_limits<double>::digits / 2,
                                                            max_iter);
  const double best = -sign * v;
  if (!std::isfinite(v) || sign * best < sign * centre.delta) return {centre.x0, centre.delta};
  return {x, best};
}

double wrap(double x) {
  double r = std::fmod(x, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

}  // namespace

int default_grid(int q) { return std::max(64, 16 * q); }

TongueSample width_from_profile(const MapParams& m, double eps, const DeltaProfile& profile,
                                const NewtonOptions& newton) {
  const auto& pts = profile.points;
  const auto by_delta = [](const ImplicitSolution& a, const ImplicitSolution& b) { return a.delta < b.delta; };
  const auto imax = static_cast<std::size_t>(std::max_element(pts.begin(), pts.end(), by_delta) - pts.begin());
  const auto imin = static_cast<std::size_t>(std::min_element(pts.begin(), pts.end(), by_delta) - pts.begin());
  const Refined hi = refine_extremum(m, eps, profile, imax, +1.0, newton);
  const Refined lo = refine_extremum(m, eps, profile, imin, -1.0, newton);
  TongueSample s;
  s.eps = eps;
  s.delta_max = hi.value;
  s.delta_min = lo.value;
  s.width = std::max(0.0, hi.value - lo.value);
  s.x_argmax = wrap(hi.x);
  s.x_argmin = wrap(lo.x);
  return s;
}

TongueSample width_at(const MapParams& m, double eps, const TongueOptions& opts) {
  m.validate_coprime();
  const int grid = opts.grid > 0 ? opts.grid : default_grid(m.q);
  const DeltaProfile profile = continue_in_x(eps, m, grid, opts.continuation);
  return width_from_profile(m, eps, profile, opts.continuation.newton);
}

std::vector<SweepEntry> sweep(const MapParams& m, const std::vector<double>& eps_list,
                              const TongueOptions& opts, int jobs) {
  if (!std::is_sorted(eps_list.begin(), eps_list.end()))
    throw std::invalid_argument("sweep: eps list must be sorted ascending");
  m.validate_coprime();
  std::vector<SweepEntry> out(eps_list.size());
  const int grid = opts.grid > 0 ? opts.grid : default_grid(m.q);

  auto run_one = [&](std::size_t i, const ContinuationOptions& copts) -> std::optional<DeltaYSeed> {
    out[i].eps = eps_list[i];
    try {
      const DeltaProfile profile = continue_in_x(eps_list[i], m, grid, copts);
      out[i].sample = width_from_profile(m, eps_list[i], profile, copts.newton);
      return DeltaYSeed{profile.points.front().delta, profile.points.front().y0};
    } catch (const std::exception& e) {
      out[i].error = e.what();
      return std::nullopt;
    }
  };

  if (jobs > 1) {
    parallel_for(eps_list.size(), jobs, [&](std::size_t i) {
      ContinuationOptions copts = opts.continuation;
      copts.seed.reset();
      run_one(i, copts);
    });
  } else {
    ContinuationOptions copts = opts.continuation;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
      copts.seed = run_one(i, copts);
    }
  }
  return out;
}

ScalingFit fit_exponent(const std::vector<TongueSample>& samples) {
  std::vector<double> lx;
  std::vector<double> ly;
  ScalingFit fit;
  fit.eps_lo = std::numeric_limits<double>::infinity();
  fit.eps_hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (!(s.width > 1e3 * kNewtonTolerance) || !(s.eps > 0.0)) continue;
    lx.push_back(std::log(s.eps));
    ly.push_back(std::log(s.width));
    fit.eps_lo = std::min(fit.eps_lo, s.eps);
    fit.eps_hi = std::max(fit.eps_hi, s.eps);
  }
  const auto n = lx.size();
  if (n < 5) {
    throw InsufficientDataError("fit_exponent: need >= 5 samples with width > 1e-9, have " +
                                std::to_string(n));
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("fit_exponent: all samples share one eps");
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual = std::max(fit.residual, std::abs(ly[i] - fit.log_prefactor - fit.exponent * lx[i]));
  }
  fit.samples = static_cast<int>(n);
  return fit;
}

SaddleNodeLocus saddle_node_locus(const MapParams& m, double eps, const TongueOptions& opts) {
  const TongueSample s = width_at(m, eps, opts);
  SaddleNodeLocus out;
  out.delta_plus = s.delta_max;
  out.delta_minus = s.delta_min;
  out.x_plus = s.x_argmax;
  out.x_minus = s.x_argmin;
  auto merge_orbit = [&](double x, double delta, double& y, double& tr) {
    const ImplicitSolution sol = solve_delta_y_homotopy(x, eps, m, opts.continuation.newton);
    const ImplicitSolution polished =
        solve_delta_y(x, eps, m, DeltaYSeed{sol.delta, sol.y0}, opts.continuation.newton);
    y = polished.y0;
    tr = trace(monodromy({x, y}, m.with(eps, delta), m.q));
  };
  merge_orbit(out.x_plus, out.delta_plus, out.y_plus, out.trace_plus);
  merge_orbit(out.x_minus, out.delta_minus, out.y_minus, out.trace_minus);
  return out;
}

void write_tongue_csv(std::ostream& out, const std::vector<TongueSample>& samples) {
  out << "eps,width,delta_max,delta_min,x_argmax,x_argmin\n";
  for (const auto& s : samples) {
    const double cells[] = {s.eps, s.width, s.delta_max, s.delta_min, s.x_argmax, s.x_argmin};
    std::string line;
    for (double v : cells) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      if (!line.empty()) line += ',';
      line.append(buf, res.ptr);
    }
    out << line << '\n';
  }
}

std::vector<TongueSample> read_tongue_csv(std::istream& in) {
  std::vector<TongueSample> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("eps,width", 0) != 0) throw std::runtime_error("tongue CSV: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 6) throw std::runtime_error("tongue CSV: expected 6 columns in '" + line + "'");
    out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
  return out;
}

void to_json(nlohmann::json& j, const TongueSample& s) {
  j = nlohmann::json{{"eps", s.eps},           {"width", s.width},       {"delta_max", s.delta_max},
                     {"delta_min", s.delta_min}, {"x_argmax", s.x_argmax}, {"x_argmin", s.x_argmin}};
}

void to_json(nlohmann::json& j, const ScalingFit& f) {
  j = nlohmann::json{{"exponent", f.exponent}, {"log_prefactor", f.log_prefactor},
                     {"residual", f.residual}, {"eps_range", {f.eps_lo, f.eps_hi}},
                     {"samples", f.samples}};
}

}  // namespace atongue
