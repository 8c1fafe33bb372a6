#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "symbreak/core.hpp"

namespace symbreak {

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string stroke;  // CSS color; empty picks from the default palette
};

/// Axis ranges left as NaN are fitted to the data with a small margin.
struct Axes {
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  double y_min = std::numeric_limits<double>::quiet_NaN();
  double y_max = std::numeric_limits<double>::quiet_NaN();
  std::string x_title;
  std::string y_title;
  std::string title;
};

struct FigureDocument {
  std::vector<Curve> curves;
  Axes axes;
};

namespace detail {

// 6 significant digits everywhere: enough for a plot, few enough that output
// is byte-stable across platforms with correctly rounded printf.
inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

inline const char* palette(size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return colors[i % (sizeof colors / sizeof *colors)];
}

}  // namespace detail

/// Standalone SVG with one polyline per curve. Polyline points stay in data
/// coordinates (a group transform maps them to the canvas), so the emitted
/// numbers can be read back directly. Output is a pure function of the
/// figure: no timestamps, fixed precision, byte-identical on repeated calls.
inline std::string render_svg(const FigureDocument& fig) {
  size_t total_points = 0;
  for (const auto& c : fig.curves) total_points += c.points.size();
  if (fig.curves.empty() || total_points == 0)
    throw empty_figure("render_svg: figure has no curve data");
  for (const auto& c : fig.curves)
    for (auto [x, y] : c.points)
      if (!std::isfinite(x) || !std::isfinite(y))
        throw invalid_parameter("render_svg: non-finite coordinate in curve '" + c.label + "'");

  double x_lo = fig.axes.x_min, x_hi = fig.axes.x_max;
  double y_lo = fig.axes.y_min, y_hi = fig.axes.y_max;
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !std::isfinite(y_lo) ||
      !std::isfinite(y_hi)) {
    double dx_lo = std::numeric_limits<double>::infinity(), dx_hi = -dx_lo;
    double dy_lo = dx_lo, dy_hi = -dx_lo;
    for (const auto& c : fig.curves)
      for (auto [x, y] : c.points) {
        dx_lo = std::min(dx_lo, x);
        dx_hi = std::max(dx_hi, x);
        dy_lo = std::min(dy_lo, y);
        dy_hi = std::max(dy_hi, y);
      }
    auto pad = [](double lo, double hi) {
      double m = (hi - lo) > 0 ? 0.05 * (hi - lo) : 1.0;
      return std::pair{lo - m, hi + m};
    };
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi)) std::tie(x_lo, x_hi) = pad(dx_lo, dx_hi);
    if (!std::isfinite(y_lo) || !std::isfinite(y_hi)) std::tie(y_lo, y_hi) = pad(dy_lo, dy_hi);
  }
  if (!(x_lo < x_hi) || !(y_lo < y_hi))
    throw invalid_parameter("render_svg: degenerate axis range");

  const double W = 720, H = 480, L = 72, R = 24, T = 40, B = 56;
  const double sx = (W - L - R) / (x_hi - x_lo);
  const double sy = (H - T - B) / (y_hi - y_lo);
  auto px = [&](double x) { return L + (x - x_lo) * sx; };
  auto py = [&](double y) { return H - B - (y - y_lo) * sy; };
  using detail::fmt6;
  using detail::xml_escape;

  std::string s;
  s.reserve(4096 + 24 * total_points);
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  if (!fig.axes.title.empty())
    s += "  <title>" + xml_escape(fig.axes.title) + "</title>\n";
  s += "  <rect x=\"" + fmt6(L) + "\" y=\"" + fmt6(T) + "\" width=\"" + fmt6(W - L - R) +
       "\" height=\"" + fmt6(H - T - B) + "\" fill=\"white\" stroke=\"#333\"/>\n";
  if (!fig.axes.title.empty())
    s += "  <text x=\"" + fmt6(0.5 * W) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + xml_escape(fig.axes.title) +
         "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    double xv = x_lo + i * (x_hi - x_lo) / 4;
    double yv = y_lo + i * (y_hi - y_lo) / 4;
    s += "  <line x1=\"" + fmt6(px(xv)) + "\" y1=\"" + fmt6(H - B) + "\" x2=\"" + fmt6(px(xv)) +
         "\" y2=\"" + fmt6(H - B + 5) + "\" stroke=\"#333\"/>\n";
    s += "  <text x=\"" + fmt6(px(xv)) + "\" y=\"" + fmt6(H - B + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(xv) +
         "</text>\n";
    s += "  <line x1=\"" + fmt6(L - 5) + "\" y1=\"" + fmt6(py(yv)) + "\" x2=\"" + fmt6(L) +
         "\" y2=\"" + fmt6(py(yv)) + "\" stroke=\"#333\"/>\n";
    s += "  <text x=\"" + fmt6(L - 8) + "\" y=\"" + fmt6(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt6(yv) +
         "</text>\n";
  }
  if (!fig.axes.x_title.empty())
    s += "  <text x=\"" + fmt6(0.5 * W) + "\" y=\"" + fmt6(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         xml_escape(fig.axes.x_title) + "</text>\n";
  if (!fig.axes.y_title.empty())
    s += "  <text x=\"14\" y=\"" + fmt6(T - 10) +
         "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"13\">" +
         xml_escape(fig.axes.y_title) + "</text>\n";

  // Data-space group: pixel = (TX + sx * x, TY - sy * y).
  s += "  <g transform=\"translate(" + fmt6(L - x_lo * sx) + "," + fmt6(H - B + y_lo * sy) +
       ") scale(" + fmt6(sx) + ",-" + fmt6(sy) + ")\" clip-path=\"none\">\n";
  for (size_t i = 0; i < fig.curves.size(); ++i) {
    const auto& c = fig.curves[i];
    if (c.points.empty()) continue;
    std::string color = c.stroke.empty() ? detail::palette(i) : c.stroke;
    s += "    <polyline fill=\"none\" stroke=\"" + xml_escape(color) +
         "\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" data-label=\"" +
         xml_escape(c.label) + "\" points=\"";
    for (size_t j = 0; j < c.points.size(); ++j) {
      if (j) s += ' ';
      s += fmt6(c.points[j].first) + "," + fmt6(c.points[j].second);
    }
    s += "\"/>\n";
  }
  s += "  </g>\n";

  double ly = T + 16;
  for (size_t i = 0; i < fig.curves.size(); ++i) {
    const auto& c = fig.curves[i];
    if (c.label.empty() || fig.curves.size() > 12) continue;  // oversized legends help nobody
    std::string color = c.stroke.empty() ? detail::palette(i) : c.stroke;
    s += "  <rect x=\"" + fmt6(W - R - 180) + "\" y=\"" + fmt6(ly - 9) +
         "\" width=\"14\" height=\"4\" fill=\"" + xml_escape(color) + "\"/>\n";
    s += "  <text x=\"" + fmt6(W - R - 162) + "\" y=\"" + fmt6(ly - 3) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(c.label) + "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

struct ParsedPolyline {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Inverse of render_svg for the curve data: every polyline's data-label and
/// point list, in document order. Tests and the verification suite read
/// figures back through this rather than trusting the renderer.
inline std::vector<ParsedPolyline> parse_svg_polylines(const std::string& svg) {
  std::vector<ParsedPolyline> out;
  size_t pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    size_t end = svg.find("/>", pos);
    if (end == std::string::npos) break;
    std::string tag = svg.substr(pos, end - pos);
    ParsedPolyline p;
    if (size_t l = tag.find("data-label=\""); l != std::string::npos) {
      l += 12;
      p.label = tag.substr(l, tag.find('"', l) - l);
    }
    if (size_t q = tag.find("points=\""); q != std::string::npos) {
      q += 8;
      std::string pts = tag.substr(q, tag.find('"', q) - q);
      const char* c = pts.c_str();
      char* next = nullptr;
      while (*c) {
        double x = std::strtod(c, &next);
        if (next == c) break;
        c = next;
        while (*c == ',' || *c == ' ') ++c;
        double y = std::strtod(c, &next);
        if (next == c) break;
        c = next;
        while (*c == ' ') ++c;
        p.points.emplace_back(x, y);
      }
    }
    out.push_back(std::move(p));
    pos = end;
  }
  return out;
}

}  // namespace symbreak
