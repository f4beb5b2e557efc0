#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace atongue::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Fully resolved command line (flags merged over an optional config file).
struct RunConfig {
  std::string command;  // orbit | profile | tongue | series | chain | fit
  std::string f = "sin";
  std::vector<double> f_cos;  // a_0..a_D, overrides f when non-empty
  std::vector<double> f_sin;  // b_1..b_D
  int q = 1;
  int p = 0;
  std::vector<double> eps{0.1};
  double delta = 0.0;
  int order = 4;
  int grid = 0;  // 0 picks the module default
  double gamma = 0.5;
  double dt = 0.0;  // 0 picks the stability limit
  double horizon = 1e5;
  int decimation = 100;
  std::vector<double> bracket;  // chain: delta_lo, delta_hi for the critical torque
  std::string mode = "continuation";
  double tolerance = 1e-12;
  int jobs = 1;
  std::string format;  // csv | json | svg; empty picks the command default
  std::string in;      // fit: tongue CSV
  std::string out = "-";

  bool operator==(const RunConfig&) const = default;
};

/// Thrown for malformed flags or rejected parameter combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv-style arguments (without the program name). Throws UsageError.
/// `help` is set when --help was requested; the text is then in `help_text`.
RunConfig parse_args(const std::vector<std::string>& args, bool* help = nullptr,
                     std::string* help_text = nullptr);

/// key=value text accepted by --config.
std::string to_config_text(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// Exit code 0 on success, 1 on numerical failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace atongue::cli
