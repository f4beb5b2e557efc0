#include "cli.hpp"
#include "svg.hpp"

#include "atongue/tongue.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using atongue::cli::RunConfig;
using atongue::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string body;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') body += line + "\n";
  }
  return body;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("atongue_test_" + name);
}

}  // namespace

TEST_CASE("no arguments prints usage and exits 2") {
  const Result r = call({});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("help lists every knob with its default") {
  const Result r = call({"--help"});
  CHECK(r.code == 0);
  for (const char* flag : {"--f", "--q", "--p", "--eps", "--delta", "--order", "--grid", "--gamma", "--dt",
                           "--horizon", "--out", "--jobs", "--format", "--config"}) {
    CHECK(r.out.find(flag) != std::string::npos);
  }
  CHECK(r.out.find("[0.5]") != std::string::npos);
}

TEST_CASE("tongue q = 1 writes widths 2 eps with a metadata header") {
  const Result r = call({"tongue", "--f", "sin", "--q", "1", "--p", "0", "--eps", "0.1,0.2,0.3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# atongue ", 0) == 0);
  CHECK(r.out.find("# wall_clock=") != std::string::npos);
  CHECK(r.out.find("# q=1") != std::string::npos);
  std::istringstream body(data_lines(r.out));
  const auto samples = atongue::read_tongue_csv(body);
  REQUIRE(samples.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(samples[i].width == doctest::Approx(0.2 * (i + 1)).epsilon(1e-8));
}

TEST_CASE("series JSON reports r = 2 for q = 2") {
  const Result r = call({"series", "--f", "sin", "--q", "2", "--p", "1", "--order", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("r") == 2);
  CHECK(j.at("meta").at("version") == atongue::cli::kVersion);
  CHECK(j.at("meta").contains("wall_clock"));
  CHECK(j.at("meta").at("config").at("order") == 4);
}

TEST_CASE("invalid combinations are usage errors") {
  CHECK(call({"tongue", "--q", "4", "--p", "2"}).code == 2);
  CHECK(call({"tongue", "--eps", "0.3,0.1"}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"series", "--order", "0"}).code == 2);
  CHECK(call({"chain", "--q", "1"}).code == 2);
  CHECK(call({"fit"}).code == 2);
  CHECK(call({"series", "--f", "tan"}).code == 2);
  CHECK(call({"tongue", "--format", "xml"}).code == 2);
}

TEST_CASE("numerical failures exit 1") {
  const auto path = temp_file("few.csv");
  {
    std::ofstream f(path);
    f << "eps,width,delta_max,delta_min,x_argmax,x_argmin\n0.1,0.01,0,0,0,0\n0.2,0.04,0,0,0,0\n";
  }
  const Result r = call({"fit", "--in", path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("need >= 5") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("config file round trip; flags override the file") {
  const RunConfig a = atongue::cli::parse_args(
      {"tongue", "--f", "1 + 0.3cos3x", "--q", "3", "--p", "2", "--eps", "0.1,0.25", "--grid", "96", "--jobs", "2",
       "--mode", "independent", "--f-sin", "0.5,0.25"});
  const auto path = temp_file("cfg.ini");
  {
    std::ofstream f(path);
    f << atongue::cli::to_config_text(a);
  }
  const RunConfig b = atongue::cli::parse_args({"--config", path.string()});
  CHECK(b == a);
  const RunConfig c = atongue::cli::parse_args({"--config", path.string(), "--q", "5", "--eps", "0.3"});
  CHECK(c.q == 5);
  CHECK(c.eps == std::vector<double>{0.3});
  CHECK(c.p == 2);
  CHECK(c.grid == 96);
  std::filesystem::remove(path);
}

TEST_CASE("explicit coefficient lists override the shorthand") {
  const Result r = call({"series", "--f-cos", "0", "--f-sin", "0,1", "--q", "4", "--p", "1", "--order", "3"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("r") == 2);
}

TEST_CASE("outputs go to --out files") {
  const auto path = temp_file("profile.svg");
  const Result r = call({"profile", "--q", "1", "--eps", "0.2", "--format", "svg", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const std::string svg((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<metadata>") != std::string::npos);
  CHECK(svg.find(">max</text>") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("chain and orbit commands") {
  const Result chain = call({"chain", "--q", "3", "--p", "1", "--eps", "0.3", "--delta", "0.0005", "--horizon",
                             "2000"});
  REQUIRE(chain.code == 0);
  CHECK(nlohmann::json::parse(chain.out).at("kind") == "equilibrium");
  const Result traj = call({"chain", "--q", "2", "--eps", "0.3", "--horizon", "10", "--format", "csv",
                            "--decimation", "50"});
  REQUIRE(traj.code == 0);
  CHECK(data_lines(traj.out).rfind("t,x_0,x_1,v_0,v_1\n", 0) == 0);
  const Result orbit = call({"orbit", "--q", "3", "--p", "1", "--eps", "0.2", "--delta", "0.0001"});
  REQUIRE(orbit.code == 0);
  CHECK(nlohmann::json::parse(orbit.out).at("orbits").size() == 2);
}

TEST_CASE("fit reads a tongue CSV produced by the tool") {
  const auto path = temp_file("tongue.csv");
  REQUIRE(call({"tongue", "--q", "2", "--p", "1", "--eps", "0.1,0.15,0.2,0.25,0.3", "--out", path.string()}).code ==
          0);
  const Result r = call({"fit", "--in", path.string()});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("fit").at("exponent").get<double>() == doctest::Approx(2.0).epsilon(0.05));
  std::filesystem::remove(path);
}

namespace plot = atongue::plot;

TEST_CASE("svg: two-point log-log series carries its slope") {
  plot::Dataset d{"t", "eps", "width", {{"w", {0.1, 0.2}, {0.01, 0.04}}}, {}, {}};
  const std::string svg = plot::emit_svg(d, plot::PlotKind::loglog);
  CHECK(svg.find("slope = 2.000") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("svg: deterministic output and input validation") {
  plot::Dataset d{"p", "x", "y", {{"a", {0, 1, 2}, {1, -1, 0.5}}}, {{1, -1, "min"}}, {}};
  CHECK(plot::emit_svg(d, plot::PlotKind::profile) == plot::emit_svg(d, plot::PlotKind::profile));
  plot::Dataset empty{"e", "x", "y", {}, {}, {}};
  CHECK_THROWS_AS(plot::emit_svg(empty, plot::PlotKind::profile), std::invalid_argument);
  plot::Dataset neg{"n", "x", "y", {{"a", {1, 2}, {-1, 1}}}, {}, {}};
  CHECK_THROWS_AS(plot::emit_svg(neg, plot::PlotKind::loglog), std::invalid_argument);
}

TEST_CASE("svg: q = 1 profile marks extrema at +-eps") {
  const Result r = call({"profile", "--q", "1", "--eps", "0.25", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto ext = nlohmann::json::parse(r.out).at("extrema");
  CHECK(ext.at("delta_max").get<double>() == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(ext.at("delta_min").get<double>() == doctest::Approx(-0.25).epsilon(1e-10));
}
