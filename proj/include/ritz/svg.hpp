#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ritz/errors.hpp"
#include "ritz/io.hpp"

namespace ritz {

// Minimal chart emitter for the experiment drivers. The output is a pure
// function of the series data: fixed canvas, fixed palette, fixed "%.2f"
// coordinate formatting, so identical data gives identical bytes.

struct SvgSeries {
  std::string label;
  std::vector<std::array<double, 2>> points;
  std::string color;  // palette slot when empty
  bool dashed = false;
};

struct SvgOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = true;
  bool log_y = true;
  int width = 760;
  int height = 500;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

inline std::string tick_label(double v, bool log_axis) {
  char buf[40];
  if (log_axis) {
    std::snprintf(buf, sizeof(buf), "1e%d", static_cast<int>(std::lround(v)));
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return std::string(buf);
}

}  // namespace detail

inline void write_svg_plot(const std::string& path, const std::vector<SvgSeries>& series,
                           const SvgOptions& opt) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double ml = 78, mr = 24, mt = 46, mb = 58;
  const double pw = opt.width - ml - mr, ph = opt.height - mt - mb;

  // Transform points to axis space, dropping anything a log axis cannot show.
  auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
      if (opt.log_x && p[0] <= 0.0) continue;
      if (opt.log_y && p[1] <= 0.0) continue;
      xmin = std::min(xmin, tx(p[0]));
      xmax = std::max(xmax, tx(p[0]));
      ymin = std::min(ymin, ty(p[1]));
      ymax = std::max(ymax, ty(p[1]));
    }
  if (!(xmin <= xmax)) {
    xmin = 0.0;
    xmax = 1.0;
  }
  if (!(ymin <= ymax)) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double xpad = 0.02 * (xmax - xmin), ypad = 0.04 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double ax) { return ml + (ax - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ay) { return mt + (ymax - ay) / (ymax - ymin) * ph; };

  auto ticks_for = [](double lo, double hi, bool log_axis) {
    std::vector<double> t;
    if (log_axis) {
      int a = static_cast<int>(std::ceil(lo)), b = static_cast<int>(std::floor(hi));
      int step = std::max(1, (b - a) / 8 + ((b - a) % 8 ? 1 : 0));
      for (int d = a; d <= b; d += step) t.push_back(static_cast<double>(d));
    } else {
      double span = hi - lo;
      double raw = span / 6.0;
      double mag = std::pow(10.0, std::floor(std::log10(raw)));
      double step = mag;
      for (double m : {1.0, 2.0, 5.0, 10.0})
        if (mag * m >= raw) {
          step = mag * m;
          break;
        }
      double start = std::ceil(lo / step) * step;
      for (double v = start; v <= hi + 1e-9 * step; v += step) t.push_back(v);
    }
    return t;
  };

  TextFile f(path);
  char head[256];
  std::snprintf(head, sizeof(head),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">",
                opt.width, opt.height, opt.width, opt.height);
  f.line(head);
  f.line("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
  f.line("<g font-family=\"monospace\" font-size=\"12\">");

  // Grid and tick labels.
  for (double t : ticks_for(xmin, xmax, opt.log_x)) {
    std::string x = detail::svg_num(px(t));
    f.line("<line x1=\"" + x + "\" y1=\"" + detail::svg_num(mt) + "\" x2=\"" + x + "\" y2=\"" +
           detail::svg_num(mt + ph) + "\" stroke=\"#dddddd\"/>");
    f.line("<text x=\"" + x + "\" y=\"" + detail::svg_num(mt + ph + 18) +
           "\" text-anchor=\"middle\">" + detail::tick_label(t, opt.log_x) + "</text>");
  }
  for (double t : ticks_for(ymin, ymax, opt.log_y)) {
    std::string y = detail::svg_num(py(t));
    f.line("<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + y + "\" x2=\"" +
           detail::svg_num(ml + pw) + "\" y2=\"" + y + "\" stroke=\"#dddddd\"/>");
    f.line("<text x=\"" + detail::svg_num(ml - 6) + "\" y=\"" + y +
           "\" text-anchor=\"end\" dominant-baseline=\"middle\">" +
           detail::tick_label(t, opt.log_y) + "</text>");
  }
  f.line("<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) + "\" width=\"" +
         detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
         "\" fill=\"none\" stroke=\"#333333\"/>");

  // Titles and axis labels.
  f.line("<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">" + opt.title + "</text>");
  f.line("<text x=\"" + detail::svg_num(ml + pw / 2) + "\" y=\"" +
         detail::svg_num(mt + ph + 42) + "\" text-anchor=\"middle\">" + opt.xlabel + "</text>");
  f.line("<text x=\"18\" y=\"" + detail::svg_num(mt + ph / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + detail::svg_num(mt + ph / 2) +
         ")\">" + opt.ylabel + "</text>");

  // Data polylines.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    std::string color = ser.color.empty() ? kPalette[s % 8] : ser.color;
    std::string pts;
    for (const auto& p : ser.points) {
      if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
      if (opt.log_x && p[0] <= 0.0) continue;
      if (opt.log_y && p[1] <= 0.0) continue;
      if (!pts.empty()) pts += ' ';
      pts += detail::svg_num(px(tx(p[0]))) + "," + detail::svg_num(py(ty(p[1])));
    }
    if (pts.empty()) continue;
    f.line("<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.6\"" + (ser.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>");
  }

  // Legend, one row per series.
  double lx = ml + 12, ly = mt + 14;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    std::string color = ser.color.empty() ? kPalette[s % 8] : ser.color;
    std::string y = detail::svg_num(ly + 16.0 * static_cast<double>(s));
    f.line("<line x1=\"" + detail::svg_num(lx) + "\" y1=\"" + y + "\" x2=\"" +
           detail::svg_num(lx + 22) + "\" y2=\"" + y + "\" stroke=\"" + color +
           "\" stroke-width=\"1.6\"" + (ser.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>");
    f.line("<text x=\"" + detail::svg_num(lx + 28) + "\" y=\"" + y +
           "\" dominant-baseline=\"middle\">" + ser.label + "</text>");
  }

  f.line("</g>");
  f.line("</svg>");
}

}  // namespace ritz
