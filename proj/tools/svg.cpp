#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace atongue::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo;
  double hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
      }
      if (out.size() < 2) out = {lo, hi};
    } else {
      for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
    }
    return out;
  }
};

Axis make_axis(const std::vector<const std::vector<double>*>& cols, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* c : cols) {
    for (double v : *c) {
      if (!std::isfinite(v)) continue;
      if (log && !(v > 0.0)) throw std::invalid_argument("emit_svg: non-positive value on a log axis");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) throw std::invalid_argument("emit_svg: no finite data");
  if (lo == hi) {
    const double pad = log ? 0.0 : (lo == 0.0 ? 1.0 : 0.1 * std::abs(lo));
    if (log) {
      lo /= 2.0;
      hi *= 2.0;
    } else {
      lo -= pad;
      hi += pad;
    }
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

}  // namespace

std::string emit_svg(const Dataset& data, PlotKind kind) {
  std::size_t points = 0;
  for (const auto& s : data.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("emit_svg: series x/y length mismatch");
    points += s.x.size();
  }
  if (points == 0) throw std::invalid_argument("emit_svg: empty dataset");

  const bool log = kind == PlotKind::loglog;
  std::vector<const std::vector<double>*> xs;
  std::vector<const std::vector<double>*> ys;
  for (const auto& s : data.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  std::vector<double> mx;
  std::vector<double> my;
  for (const auto& m : data.markers) {
    mx.push_back(m.x);
    my.push_back(m.y);
  }
  xs.push_back(&mx);
  ys.push_back(&my);
  const Axis ax = make_axis(xs, log);
  const Axis ay = make_axis(ys, log);
  const double x0 = kLeft;
  const double x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom;
  const double y1 = kTop;
  auto px = [&](double v) { return ax.map(v, x0, x1); };
  auto py = [&](double v) { return ay.map(v, y0, y1); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  if (!data.metadata.empty()) svg += "<metadata>" + escape(data.metadata) + "</metadata>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         escape(data.title) + "</text>\n";

  // axes and ticks
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x1) + "\" y2=\"" + fmt(y0) + "\"/>\n";
  svg += "<line x1=\"" + fmt(x0) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y1) + "\"/>\n";
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y0) + "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(y0 + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y0 + 18) + "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    svg += "<line x1=\"" + fmt(x0 - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(x0 - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  }
  svg += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 15) + "\" text-anchor=\"middle\">" +
         escape(data.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt((y0 + y1) / 2) + ")\">" + escape(data.y_label) + "</text>\n";
  svg += "</g>\n";

  // data
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    const auto& s = data.series[i];
    const char* colour = kPalette[i % std::size(kPalette)];
    std::string pts;
    for (std::size_t j = 0; j < s.x.size(); ++j) {
      if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(px(s.x[j])) + "," + fmt(py(s.y[j]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    if (kind == PlotKind::loglog) {
      for (std::size_t j = 0; j < s.x.size(); ++j) {
        svg += "<circle cx=\"" + fmt(px(s.x[j])) + "\" cy=\"" + fmt(py(s.y[j])) + "\" r=\"3\" fill=\"" + colour + "\"/>\n";
      }
      if (s.x.size() >= 2) {
        const double slope = (std::log(s.y.back()) - std::log(s.y.front())) / (std::log(s.x.back()) - std::log(s.x.front()));
        char buf[64];
        std::snprintf(buf, sizeof buf, "slope = %.3f", slope);
        svg += "<text x=\"" + fmt(x0 + 10) + "\" y=\"" + fmt(y1 + 16 + 14 * static_cast<double>(i)) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + colour + "\">" + escape(s.name) + " " + buf +
               "</text>\n";
      }
    } else if (!s.name.empty() && data.series.size() > 1) {
      svg += "<text x=\"" + fmt(x1 - 10) + "\" y=\"" + fmt(y1 + 16 + 14 * static_cast<double>(i)) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + colour + "\">" +
             escape(s.name) + "</text>\n";
    }
  }
  for (const auto& m : data.markers) {
    svg += "<circle cx=\"" + fmt(px(m.x)) + "\" cy=\"" + fmt(py(m.y)) +
           "\" r=\"4\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    if (!m.label.empty()) {
      svg += "<text x=\"" + fmt(px(m.x) + 6) + "\" y=\"" + fmt(py(m.y) - 6) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(m.label) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace atongue::plot
