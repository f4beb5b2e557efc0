#include "cli.hpp"

#include "svg.hpp"

#include "atongue/orbits.hpp"
#include "atongue/series.hpp"
#include "atongue/sgchain.hpp"
#include "atongue/tongue.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

namespace atongue::cli {

namespace {

const std::vector<std::string> kCommands{"orbit", "profile", "tongue", "series", "chain", "fit"};

void build_app(CLI::App& app, RunConfig& c) {
  app.description("Arnold tongues of the drifted standard map and the twisted sine-Gordon chain.");
  app.add_option("command", c.command, "orbit | profile | tongue | series | chain | fit")
      ->check(CLI::IsMember(kCommands));
  app.add_option("--f", c.f, "Forcing f(x): sin, cos, sin2x, '1 + 0.3cos3x' or a JSON object")
      ->capture_default_str();
  app.add_option("--f-cos", c.f_cos, "Cosine coefficients a_0..a_D (overrides --f)")->delimiter(',');
  app.add_option("--f-sin", c.f_sin, "Sine coefficients b_1..b_D (overrides --f)")->delimiter(',');
  app.add_option("--q", c.q, "Period q")->capture_default_str();
  app.add_option("--p", c.p, "Rotation numerator p (twist for the chain)")->capture_default_str();
  app.add_option("--eps", c.eps, "Forcing amplitude(s), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--delta", c.delta, "Drift / torque")->capture_default_str();
  app.add_option("--order", c.order, "Series order N")->capture_default_str();
  app.add_option("--grid", c.grid, "x0 grid size (0: max(64, 16q))")->capture_default_str();
  app.add_option("--gamma", c.gamma, "Chain damping")->capture_default_str();
  app.add_option("--dt", c.dt, "Chain time step (0: stability limit)")->capture_default_str();
  app.add_option("--horizon", c.horizon, "Chain integration horizon")->capture_default_str();
  app.add_option("--decimation", c.decimation, "Chain trajectory output stride")->capture_default_str();
  app.add_option("--bracket", c.bracket, "Chain critical torque bracket lo,hi")
      ->delimiter(',')
      ->expected(2);
  app.add_option("--mode", c.mode, "Seeding along x0: continuation | independent")
      ->check(CLI::IsMember({"continuation", "independent"}))
      ->capture_default_str();
  app.add_option("--tolerance", c.tolerance, "Newton tolerance")->capture_default_str();
  app.add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  app.add_option("--format", c.format, "csv | json | svg (default depends on the command)")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--in", c.in, "Input tongue CSV for fit");
  app.add_option("--out", c.out, "Output path, '-' for stdout")->capture_default_str();
  app.set_config("--config", "", "key=value configuration file; flags override it");
}

void validate(RunConfig& c) {
  if (c.command.empty()) throw UsageError("missing command (" + std::string("orbit|profile|tongue|series|chain|fit") + ")");
  if (c.q < 1) throw UsageError("--q must be >= 1");
  if (c.eps.empty()) throw UsageError("--eps needs at least one value");
  for (double e : c.eps) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw UsageError("--eps values must be finite and >= 0");
  }
  if (c.order < 1) throw UsageError("--order must be >= 1");
  if (c.grid < 0) throw UsageError("--grid must be >= 0");
  if (c.jobs < 1) throw UsageError("--jobs must be >= 1");
  if (c.decimation < 1) throw UsageError("--decimation must be >= 1");
  if (!(c.tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
  if (!(c.horizon > 0.0)) throw UsageError("--horizon must be > 0");
  if (c.dt < 0.0) throw UsageError("--dt must be >= 0");
  const bool needs_coprime = c.command == "tongue" || c.command == "series" || c.command == "profile";
  if (needs_coprime && std::gcd(c.p, c.q) != 1) throw UsageError("gcd(p, q) must be 1 for " + c.command);
  if (c.command == "tongue" && !std::is_sorted(c.eps.begin(), c.eps.end()))
    throw UsageError("--eps must be ascending for tongue");
  if (c.command == "chain") {
    if (c.q < 2) throw UsageError("chain needs --q >= 2");
    if (!(c.gamma > 0.0)) throw UsageError("chain needs --gamma > 0");
    if (!c.bracket.empty() && (c.bracket.size() != 2 || !(c.bracket[0] < c.bracket[1])))
      throw UsageError("--bracket needs lo,hi with lo < hi");
  }
  if (c.command == "fit" && c.in.empty()) throw UsageError("fit needs --in <tongue.csv>");
  if (c.format.empty()) {
    c.format = (c.command == "tongue" || c.command == "profile") ? "csv" : "json";
  }
}

TrigPoly resolve_f(const RunConfig& c) {
  if (!c.f_cos.empty() || !c.f_sin.empty()) return TrigPoly(c.f_cos, c.f_sin);
  try {
    return parse_trigpoly(c.f);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--f: ") + e.what());
  }
}

MapParams map_params(const RunConfig& c) {
  MapParams m;
  m.f = resolve_f(c);
  m.p = c.p;
  m.q = c.q;
  m.eps = c.eps.front();
  m.delta = c.delta;
  return m;
}

NewtonOptions newton_options(const RunConfig& c) {
  NewtonOptions n;
  n.tolerance = c.tolerance;
  return n;
}

ContinuationOptions continuation_options(const RunConfig& c) {
  ContinuationOptions o;
  o.mode = c.mode == "independent" ? SeedMode::independent : SeedMode::continuation;
  o.jobs = c.jobs;
  o.newton = newton_options(c);
  return o;
}

std::string wall_clock() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  std::string body;
};

class Emitter {
 public:
  explicit Emitter(const RunConfig& c) : cfg_(c), stamp_(wall_clock()) {}

  std::string csv_header() const {
    std::string s = "# atongue " + std::string(kVersion) + "\n# wall_clock=" + stamp_ + "\n";
    std::istringstream lines(to_config_text(cfg_));
    std::string line;
    while (std::getline(lines, line)) s += "# " + line + "\n";
    return s;
  }

  nlohmann::json meta() const {
    return {{"version", kVersion}, {"wall_clock", stamp_}, {"config", to_json(cfg_)}};
  }

  std::string json(nlohmann::json body) const {
    body["meta"] = meta();
    return body.dump(2) + "\n";
  }

  std::string svg(plot::Dataset data, plot::PlotKind kind) const {
    data.metadata = meta().dump();
    return plot::emit_svg(data, kind);
  }

 private:
  const RunConfig& cfg_;
  std::string stamp_;
};

// Shortest representation that round-trips.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cmd_orbit(const RunConfig& c, const Emitter& em) {
  const MapParams m = map_params(c);
  m.validate();
  const int grid = c.grid > 0 ? c.grid : default_grid(c.q);
  const auto orbits = find_orbits(m, grid, {0.0, -0.5, 0.5}, newton_options(c));
  if (c.format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& o : orbits) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& s : o.states) pts.push_back({s.x, s.y});
      list.push_back({{"kind", to_string(o.kind)},
                      {"trace", o.trace},
                      {"residual", std::max(std::abs(o.residual.R), std::abs(o.residual.S))},
                      {"points", pts}});
    }
    return em.json({{"eps", m.eps}, {"delta", m.delta}, {"orbits", list}});
  }
  if (c.format == "csv") {
    std::string s = em.csv_header() + "orbit,kind,trace,k,x,y\n";
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      for (std::size_t k = 0; k < orbits[i].states.size(); ++k) {
        s += std::to_string(i) + "," + to_string(orbits[i].kind) + "," + num(orbits[i].trace) + "," +
             std::to_string(k) + "," + num(orbits[i].states[k].x) + "," + num(orbits[i].states[k].y) + "\n";
      }
    }
    return s;
  }
  plot::Dataset d{"p/q orbits", "x", "y", {}, {}, {}};
  for (const auto& o : orbits) {
    plot::Series s{to_string(o.kind), {}, {}};
    for (const auto& st : o.states) {
      s.x.push_back(st.x);
      s.y.push_back(st.y);
    }
    d.series.push_back(std::move(s));
  }
  if (d.series.empty()) throw std::runtime_error("orbit: no periodic orbits found at this drift");
  return em.svg(std::move(d), plot::PlotKind::profile);
}

std::string cmd_profile(const RunConfig& c, const Emitter& em) {
  const MapParams m = map_params(c);
  const int grid = c.grid > 0 ? c.grid : default_grid(c.q);
  const DeltaProfile prof = continue_in_x(m.eps, m, grid, continuation_options(c));
  const TongueSample ext = width_from_profile(m, m.eps, prof, newton_options(c));
  if (c.format == "csv") {
    std::string s = em.csv_header() + "x0,delta,y0\n";
    for (const auto& pt : prof.points) s += num(pt.x0) + "," + num(pt.delta) + "," + num(pt.y0) + "\n";
    return s;
  }
  if (c.format == "json") {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : prof.points) pts.push_back({{"x0", pt.x0}, {"delta", pt.delta}, {"y0", pt.y0}});
    return em.json({{"eps", m.eps}, {"points", pts}, {"seam_mismatch", prof.seam_mismatch}, {"extrema", ext}});
  }
  plot::Series s{"Delta", {}, {}};
  for (const auto& pt : prof.points) {
    s.x.push_back(pt.x0);
    s.y.push_back(pt.delta);
  }
  s.x.push_back(2.0 * std::numbers::pi);
  s.y.push_back(prof.points.front().delta);
  plot::Dataset d{"Delta(x0) at eps = " + num(m.eps), "x0", "Delta", {s},
                  {{ext.x_argmax, ext.delta_max, "max"}, {ext.x_argmin, ext.delta_min, "min"}}, {}};
  return em.svg(std::move(d), plot::PlotKind::profile);
}

std::string cmd_tongue(const RunConfig& c, const Emitter& em, std::ostream& err, bool& failed) {
  const MapParams m = map_params(c);
  TongueOptions opts;
  opts.grid = c.grid;
  opts.continuation = continuation_options(c);
  const auto entries = sweep(m, c.eps, opts, c.jobs);
  std::vector<TongueSample> samples;
  for (const auto& e : entries) {
    if (e.sample) {
      samples.push_back(*e.sample);
    } else {
      err << "tongue: eps = " << e.eps << " failed: " << e.error << "\n";
      failed = true;
    }
  }
  if (c.format == "csv") {
    std::ostringstream s;
    s << em.csv_header();
    write_tongue_csv(s, samples);
    return s.str();
  }
  if (c.format == "json") return em.json({{"p", c.p}, {"q", c.q}, {"samples", samples}});
  plot::Series s{"width", {}, {}};
  for (const auto& t : samples) {
    if (t.width > 0.0 && t.eps > 0.0) {
      s.x.push_back(t.eps);
      s.y.push_back(t.width);
    }
  }
  plot::Dataset d{"Tongue width p/q = " + std::to_string(c.p) + "/" + std::to_string(c.q), "eps", "width",
                  {s}, {}, {}};
  return em.svg(std::move(d), plot::PlotKind::loglog);
}

std::string cmd_series(const RunConfig& c, const Emitter& em) {
  const MapParams m = map_params(c);
  const SeriesSolution sol = expand(m, c.order);
  if (c.format == "json") {
    nlohmann::json j = sol;
    return em.json(j);
  }
  if (c.format == "csv") {
    std::string s = em.csv_header() + "n,k,delta_cos,delta_sin,y_cos,y_sin\n";
    for (int n = 0; n <= sol.order; ++n) {
      const int D = std::max(sol.delta[n].support_degree(), sol.y[n].support_degree());
      for (int k = 0; k <= D; ++k) {
        s += std::to_string(n) + "," + std::to_string(k) + "," + num(sol.delta[n].cos_coeff(k)) + "," +
             num(sol.delta[n].sin_coeff(k)) + "," + num(sol.y[n].cos_coeff(k)) + "," + num(sol.y[n].sin_coeff(k)) +
             "\n";
      }
    }
    return s;
  }
  plot::Dataset d{"Series coefficients Delta_n(x)", "x", "Delta_n", {}, {}, {}};
  constexpr int kSamples = 256;
  for (int n = 1; n <= sol.order; ++n) {
    plot::Series s{"n = " + std::to_string(n), {}, {}};
    for (int i = 0; i <= kSamples; ++i) {
      const double x = 2.0 * std::numbers::pi * i / kSamples;
      s.x.push_back(x);
      s.y.push_back(sol.delta[n].eval(x));
    }
    d.series.push_back(std::move(s));
  }
  return em.svg(std::move(d), plot::PlotKind::profile);
}

std::string cmd_chain(const RunConfig& c, const Emitter& em) {
  ChainParams cp;
  cp.q = c.q;
  cp.p = c.p;
  cp.gamma = c.gamma;
  cp.eps = c.eps.front();
  cp.delta = c.delta;
  cp.validate();
  AttractorOptions ao;
  ao.dt = c.dt;
  ao.horizon = c.horizon;
  if (c.format == "json") {
    nlohmann::json j = classify_attractor(twist_state(cp), cp, ao);
    if (!c.bracket.empty()) j["critical_delta"] = critical_torque(cp, c.bracket[0], c.bracket[1], 1e-3, ao);
    return em.json(j);
  }
  const double dt = c.dt > 0.0 ? c.dt : max_time_step(cp);
  const IntegrationResult res = integrate(twist_state(cp), cp, dt, c.horizon, c.decimation);
  if (c.format == "csv") {
    std::ostringstream s;
    s << em.csv_header();
    write_trajectory_csv(s, res.trajectory);
    return s.str();
  }
  plot::Dataset d{"Chain angles", "t", "x_k", {}, {}, {}};
  for (int k = 0; k < cp.q; ++k) {
    plot::Series s{"x_" + std::to_string(k), {}, {}};
    for (const auto& st : res.trajectory) {
      s.x.push_back(st.t);
      s.y.push_back(st.pos[static_cast<std::size_t>(k)]);
    }
    d.series.push_back(std::move(s));
  }
  return em.svg(std::move(d), plot::PlotKind::trajectory);
}

std::string cmd_fit(const RunConfig& c, const Emitter& em) {
  std::ifstream in(c.in);
  if (!in) throw UsageError("cannot open --in file '" + c.in + "'");
  const auto samples = read_tongue_csv(in);
  const ScalingFit fit = fit_exponent(samples);
  if (c.format == "json") return em.json({{"fit", fit}});
  if (c.format == "csv") {
    return em.csv_header() + "exponent,log_prefactor,residual,eps_lo,eps_hi,samples\n" + num(fit.exponent) + "," +
           num(fit.log_prefactor) + "," + num(fit.residual) + "," + num(fit.eps_lo) + "," + num(fit.eps_hi) + "," +
           std::to_string(fit.samples) + "\n";
  }
  plot::Series data{"measured", {}, {}};
  for (const auto& s : samples) {
    if (s.width > 0.0 && s.eps > 0.0) {
      data.x.push_back(s.eps);
      data.y.push_back(s.width);
    }
  }
  plot::Series line{"fit", {fit.eps_lo, fit.eps_hi},
                    {std::exp(fit.log_prefactor) * std::pow(fit.eps_lo, fit.exponent),
                     std::exp(fit.log_prefactor) * std::pow(fit.eps_hi, fit.exponent)}};
  plot::Dataset d{"Width scaling", "eps", "width", {data, line}, {}, {}};
  return em.svg(std::move(d), plot::PlotKind::loglog);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + "]";
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args, bool* help, std::string* help_text) {
  RunConfig c;
  CLI::App app{"atongue", "atongue"};
  build_app(app, c);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (help) *help = false;
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (help) *help = true;
    if (help_text) *help_text = app.help();
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  validate(c);
  return c;
}

std::string to_config_text(const RunConfig& c) {
  std::string s;
  s += "command=" + quote(c.command) + "\n";
  s += "f=" + quote(c.f) + "\n";
  if (!c.f_cos.empty()) s += "f-cos=" + list(c.f_cos) + "\n";
  if (!c.f_sin.empty()) s += "f-sin=" + list(c.f_sin) + "\n";
  s += "q=" + std::to_string(c.q) + "\n";
  s += "p=" + std::to_string(c.p) + "\n";
  s += "eps=" + list(c.eps) + "\n";
  s += "delta=" + num(c.delta) + "\n";
  s += "order=" + std::to_string(c.order) + "\n";
  s += "grid=" + std::to_string(c.grid) + "\n";
  s += "gamma=" + num(c.gamma) + "\n";
  s += "dt=" + num(c.dt) + "\n";
  s += "horizon=" + num(c.horizon) + "\n";
  s += "decimation=" + std::to_string(c.decimation) + "\n";
  if (!c.bracket.empty()) s += "bracket=" + list(c.bracket) + "\n";
  s += "mode=" + quote(c.mode) + "\n";
  s += "tolerance=" + num(c.tolerance) + "\n";
  s += "jobs=" + std::to_string(c.jobs) + "\n";
  if (!c.format.empty()) s += "format=" + quote(c.format) + "\n";
  if (!c.in.empty()) s += "in=" + quote(c.in) + "\n";
  s += "out=" + quote(c.out) + "\n";
  return s;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"f", c.f},         {"f_cos", c.f_cos},         {"f_sin", c.f_sin},
          {"q", c.q},             {"p", c.p},         {"eps", c.eps},             {"delta", c.delta},
          {"order", c.order},     {"grid", c.grid},   {"gamma", c.gamma},         {"dt", c.dt},
          {"horizon", c.horizon}, {"decimation", c.decimation}, {"bracket", c.bracket},
          {"mode", c.mode},       {"tolerance", c.tolerance},   {"jobs", c.jobs},
          {"format", c.format},   {"in", c.in},       {"out", c.out}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    CLI::App app{"atongue", "atongue"};
    RunConfig dummy;
    build_app(app, dummy);
    err << app.help();
    return 2;
  }
  RunConfig c;
  try {
    bool help = false;
    std::string text;
    c = parse_args(args, &help, &text);
    if (help) {
      out << text;
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for the list of flags\n";
    return 2;
  }

  const Emitter em(c);
  bool partial_failure = false;
  std::string body;
  try {
    if (c.command == "orbit") body = cmd_orbit(c, em);
    else if (c.command == "profile") body = cmd_profile(c, em);
    else if (c.command == "tongue") body = cmd_tongue(c, em, err, partial_failure);
    else if (c.command == "series") body = cmd_series(c, em);
    else if (c.command == "chain") body = cmd_chain(c, em);
    else body = cmd_fit(c, em);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ContinuationError& e) {
    err << "numerical failure: " << e.what() << " (x0 = " << e.x0() << ", eps = " << e.eps() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  }

  if (c.out == "-") {
    out << body;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      err << "cannot write '" << c.out << "'\n";
      return 1;
    }
    f << body;
  }
  return partial_failure ? 1 : 0;
}

}  // namespace atongue::cli
