#pragma once

#include <string>
#include <vector>

namespace atongue::plot {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Marker {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

enum class PlotKind {
  loglog,     // tongue width vs eps, with slope annotation
  profile,    // Delta(x0) with extrema markers
  trajectory  // chain angles vs time
};

struct Dataset {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Marker> markers;
  std::string metadata;  // embedded verbatim (escaped) in <metadata>
};

/// Self-contained SVG document. Output depends only on the inputs.
/// Throws std::invalid_argument for a dataset without points, or with
/// non-positive values on a log axis.
std::string emit_svg(const Dataset& data, PlotKind kind);

}  // namespace atongue::plot
