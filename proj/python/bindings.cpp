#include "atongue/cylmap.hpp"
#include "atongue/orbits.hpp"
#include "atongue/series.hpp"
#include "atongue/sgchain.hpp"
#include "atongue/tongue.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace atongue;

namespace {

MapParams make_map(double eps, double delta, const TrigPoly& f, int p, int q) {
  MapParams m;
  m.eps = eps;
  m.delta = delta;
  m.f = f;
  m.p = p;
  m.q = q;
  return m;
}

ContinuationOptions continuation(const std::string& mode, int jobs) {
  ContinuationOptions o;
  if (mode == "independent") {
    o.mode = SeedMode::independent;
  } else if (mode != "continuation") {
    throw std::invalid_argument("mode must be 'continuation' or 'independent'");
  }
  o.jobs = jobs;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Arnold tongues of the drifted standard map and the twisted sine-Gordon chain";
  mod.attr("__version__") = "0.1.0";

  py::register_exception<ContinuationError>(mod, "ContinuationError", PyExc_RuntimeError);
  py::register_exception<CapacityError>(mod, "CapacityError", PyExc_ValueError);
  py::register_exception<InsufficientDataError>(mod, "InsufficientDataError", PyExc_ValueError);
  py::register_exception<BlowUpError>(mod, "BlowUpError", PyExc_RuntimeError);

  py::class_<TrigPoly>(mod, "TrigPoly")
      .def(py::init<>())
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("cos"), py::arg("sin") = std::vector<double>{})
      .def_static("harmonic", &TrigPoly::harmonic, py::arg("k"), py::arg("c"), py::arg("s"))
      .def_static("constant", &TrigPoly::constant)
      .def("__call__", &TrigPoly::eval)
      .def("eval", &TrigPoly::eval)
      .def("degree", &TrigPoly::degree, py::arg("tol") = kDegreeTolerance)
      .def("cos_coeff", &TrigPoly::cos_coeff)
      .def("sin_coeff", &TrigPoly::sin_coeff)
      .def("norm", &TrigPoly::norm)
      .def_property_readonly("cos", [](const TrigPoly& p) {
        std::vector<double> a;
        for (int k = 0; k <= p.capacity(); ++k) a.push_back(p.cos_coeff(k));
        return a;
      })
      .def_property_readonly("sin", [](const TrigPoly& p) {
        std::vector<double> b;
        for (int k = 1; k <= p.capacity(); ++k) b.push_back(p.sin_coeff(k));
        return b;
      })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * double())
      .def(double() * py::self)
      .def("__mul__", [](const TrigPoly& a, const TrigPoly& b) { return product(a, b); })
      .def("__repr__", [](const TrigPoly& p) { return "TrigPoly(" + nlohmann::json(p).dump() + ")"; });
  mod.def("parse_trigpoly", &parse_trigpoly);

  py::class_<MapParams>(mod, "MapParams")
      .def(py::init(&make_map), py::arg("eps") = 0.0, py::arg("delta") = 0.0,
           py::arg("f") = TrigPoly::harmonic(1, 0.0, 1.0), py::arg("p") = 0, py::arg("q") = 1)
      .def_readwrite("eps", &MapParams::eps)
      .def_readwrite("delta", &MapParams::delta)
      .def_readwrite("f", &MapParams::f)
      .def_readwrite("p", &MapParams::p)
      .def_readwrite("q", &MapParams::q)
      .def_property_readonly("mu", &MapParams::mu);

  py::class_<PhaseState>(mod, "PhaseState")
      .def(py::init([](double x, double y) { return PhaseState{x, y}; }), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &PhaseState::x)
      .def_readwrite("y", &PhaseState::y)
      .def("__repr__", [](const PhaseState& s) {
        return "PhaseState(x=" + std::to_string(s.x) + ", y=" + std::to_string(s.y) + ")";
      });

  mod.def("step", &step);
  mod.def("iterate", &iterate, py::arg("s0"), py::arg("m"), py::arg("n"));
  mod.def("remainders", [](const PhaseState& s, const MapParams& m, int n) {
    const RemainderPair r = remainders(s, m, n);
    return py::make_tuple(r.R, r.S);
  });
  mod.def("remainders_by_definition", [](const PhaseState& s, const MapParams& m, int n) {
    const RemainderPair r = remainders_by_definition(s, m, n);
    return py::make_tuple(r.R, r.S);
  });
  mod.def("monodromy", &monodromy);

  py::class_<PeriodicOrbit>(mod, "PeriodicOrbit")
      .def_readonly("states", &PeriodicOrbit::states)
      .def_readonly("trace", &PeriodicOrbit::trace)
      .def_property_readonly("kind", [](const PeriodicOrbit& o) { return std::string(to_string(o.kind)); });
  mod.def("find_orbits", [](const MapParams& m, int x_grid, std::vector<double> y_guesses) {
    return find_orbits(m, x_grid, y_guesses);
  }, py::arg("m"), py::arg("x_grid") = 32, py::arg("y_guesses") = std::vector<double>{0.0});

  py::class_<ImplicitSolution>(mod, "ImplicitSolution")
      .def_readonly("x0", &ImplicitSolution::x0)
      .def_readonly("eps", &ImplicitSolution::eps)
      .def_readonly("delta", &ImplicitSolution::delta)
      .def_readonly("y0", &ImplicitSolution::y0)
      .def_readonly("converged", &ImplicitSolution::converged)
      .def_readonly("iterations", &ImplicitSolution::iterations);
  mod.def("solve_delta_y", [](double x0, double eps, const MapParams& m) {
    return solve_delta_y_homotopy(x0, eps, m);
  }, py::arg("x0"), py::arg("eps"), py::arg("m"));
  mod.def("continue_in_x", [](double eps, const MapParams& m, int grid, const std::string& mode, int jobs) {
    return continue_in_x(eps, m, grid, continuation(mode, jobs)).points;
  }, py::arg("eps"), py::arg("m"), py::arg("grid") = 64, py::arg("mode") = "continuation", py::arg("jobs") = 1);

  py::class_<SeriesSolution>(mod, "SeriesSolution")
      .def_readonly("p", &SeriesSolution::p)
      .def_readonly("q", &SeriesSolution::q)
      .def_readonly("order", &SeriesSolution::order)
      .def_readonly("r", &SeriesSolution::r)
      .def_readonly("A", &SeriesSolution::A)
      .def_property_readonly("delta", [](const SeriesSolution& s) { return s.delta.coeffs(); })
      .def_property_readonly("y", [](const SeriesSolution& s) { return s.y.coeffs(); })
      .def("delta_at", [](const SeriesSolution& s, double x, double eps) { return eval_series(s.delta, x, eps); })
      .def("predicted_width", &predicted_width)
      .def("to_json", [](const SeriesSolution& s) { return nlohmann::json(s).dump(); });
  mod.def("expand", [](const MapParams& m, int order) { return expand(m, order); }, py::arg("m"),
          py::arg("order") = 4);

  py::class_<TongueSample>(mod, "TongueSample")
      .def_readonly("eps", &TongueSample::eps)
      .def_readonly("width", &TongueSample::width)
      .def_readonly("delta_max", &TongueSample::delta_max)
      .def_readonly("delta_min", &TongueSample::delta_min)
      .def_readonly("x_argmax", &TongueSample::x_argmax)
      .def_readonly("x_argmin", &TongueSample::x_argmin);
  mod.def("width_at", [](const MapParams& m, double eps, int grid, const std::string& mode, int jobs) {
    TongueOptions o;
    o.grid = grid;
    o.continuation = continuation(mode, jobs);
    return width_at(m, eps, o);
  }, py::arg("m"), py::arg("eps"), py::arg("grid") = 0, py::arg("mode") = "continuation", py::arg("jobs") = 1);
  mod.def("sweep", [](const MapParams& m, const std::vector<double>& eps, int jobs) {
    std::vector<TongueSample> out;
    for (const auto& e : sweep(m, eps, {}, jobs)) {
      if (!e.sample) throw ContinuationError(e.error, 0.0, e.eps);
      out.push_back(*e.sample);
    }
    return out;
  }, py::arg("m"), py::arg("eps"), py::arg("jobs") = 1);

  py::class_<ScalingFit>(mod, "ScalingFit")
      .def_readonly("exponent", &ScalingFit::exponent)
      .def_readonly("log_prefactor", &ScalingFit::log_prefactor)
      .def_readonly("residual", &ScalingFit::residual)
      .def_readonly("samples", &ScalingFit::samples);
  mod.def("fit_exponent", &fit_exponent);

  mod.def("saddle_node_locus", [](const MapParams& m, double eps) {
    const SaddleNodeLocus l = saddle_node_locus(m, eps);
    py::dict d;
    d["delta_plus"] = l.delta_plus;
    d["delta_minus"] = l.delta_minus;
    d["x_plus"] = l.x_plus;
    d["x_minus"] = l.x_minus;
    d["trace_plus"] = l.trace_plus;
    d["trace_minus"] = l.trace_minus;
    return d;
  });

  py::class_<ChainParams>(mod, "ChainParams")
      .def(py::init([](int q, int p, double gamma, double eps, double delta) {
             ChainParams c{q, p, gamma, eps, delta};
             c.validate();
             return c;
           }),
           py::arg("q") = 2, py::arg("p") = 0, py::arg("gamma") = 0.5, py::arg("eps") = 0.0, py::arg("delta") = 0.0)
      .def_readwrite("q", &ChainParams::q)
      .def_readwrite("p", &ChainParams::p)
      .def_readwrite("gamma", &ChainParams::gamma)
      .def_readwrite("eps", &ChainParams::eps)
      .def_readwrite("delta", &ChainParams::delta);

  py::class_<ChainState>(mod, "ChainState")
      .def(py::init<>())
      .def_readwrite("t", &ChainState::t)
      .def_readwrite("pos", &ChainState::pos)
      .def_readwrite("vel", &ChainState::vel);
  mod.def("twist_state", &twist_state);
  mod.def("integrate", [](const ChainState& s0, const ChainParams& c, double dt, double t_end, int decimation) {
    return integrate(s0, c, dt, t_end, decimation).trajectory;
  }, py::arg("s0"), py::arg("c"), py::arg("dt"), py::arg("t_end"), py::arg("decimation") = 1);

  py::class_<AttractorOptions>(mod, "AttractorOptions")
      .def(py::init<>())
      .def_readwrite("dt", &AttractorOptions::dt)
      .def_readwrite("horizon", &AttractorOptions::horizon)
      .def_readwrite("tau_eq", &AttractorOptions::tau_eq)
      .def_readwrite("tau_wave", &AttractorOptions::tau_wave);
  py::class_<AttractorReport>(mod, "AttractorReport")
      .def_property_readonly("kind", [](const AttractorReport& r) { return std::string(to_string(r.kind)); })
      .def_readonly("mean_velocity", &AttractorReport::mean_velocity)
      .def_readonly("wave_period", &AttractorReport::wave_period)
      .def_readonly("delay_error", &AttractorReport::delay_error)
      .def_readonly("periodicity_error", &AttractorReport::periodicity_error)
      .def_readonly("t_final", &AttractorReport::t_final)
      .def_readonly("final", &AttractorReport::final);
  mod.def("classify_attractor", [](const ChainParams& c, const AttractorOptions& o) {
    return classify_attractor(twist_state(c), c, o);
  }, py::arg("c"), py::arg("options") = AttractorOptions{});
  mod.def("critical_torque", [](const ChainParams& c, double lo, double hi, double rel_tol) {
    return critical_torque(c, lo, hi, rel_tol);
  }, py::arg("c"), py::arg("lo"), py::arg("hi"), py::arg("rel_tol") = 1e-3);
}
