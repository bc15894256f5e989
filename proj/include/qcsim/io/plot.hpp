#pragma once

// SVG subset used: <svg>, <rect>, <line>, <polyline>, <text>. No scripts, no
// external references, fixed number formatting so output is byte-stable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qcsim/io/table.hpp"

namespace qcsim::io {

struct PlotOptions {
  int width = 720;
  int height = 440;
  std::string title;
};

/// Pixel frame of the data area; exposed so tests can map points back.
struct PlotFrame {
  double left = 70, right = 700, top = 30, bottom = 370;
  double t0 = 0, t1 = 1, y0 = 0, y1 = 1;
  double px(double t) const { return left + (t - t0) / (t1 - t0) * (right - left); }
  double py(double y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
  double t_of(double x) const { return t0 + (x - left) / (right - left) * (t1 - t0); }
  double y_of(double y) const { return y0 + (bottom - y) / (bottom - top) * (y1 - y0); }
};

namespace detail {

inline std::string px(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

inline std::string label(double v) {
  if (std::abs(v) < 1e-300) return "0";
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else if (c == '"') o += "&quot;";
    else o += c;
  }
  return o;
}

inline double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

}  // namespace detail

inline PlotFrame plot_frame(const TimeSeriesTable& tab, const std::vector<std::string>& columns, const PlotOptions& opt = {}) {
  PlotFrame f;
  f.right = opt.width - 20.0;
  f.bottom = opt.height - 70.0;
  if (tab.t.empty()) throw FormatError("cannot plot an empty table");
  f.t0 = tab.t.front();
  f.t1 = tab.t.size() > 1 ? tab.t.back() : f.t0 + 1.0;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& c : columns)
    for (double v : tab.column(c)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double span = hi - lo;
  if (!(span > 1e-12 * std::max(1.0, std::abs(hi)))) {
    // constant data: centre it
    const double d = std::max(0.1 * std::abs(hi), 1.0);
    f.y0 = hi - d;
    f.y1 = hi + d;
  } else {
    f.y0 = lo - 0.05 * span;
    f.y1 = hi + 0.05 * span;
  }
  return f;
}

inline std::string render_svg(const TimeSeriesTable& tab, const std::vector<std::string>& columns,
                              const PlotOptions& opt = {}) {
  using detail::px;
  if (columns.empty()) throw ConfigError("plot needs at least one column");
  for (const auto& c : columns) tab.column_index(c);  // unknown column → error
  const PlotFrame f = plot_frame(tab, columns, opt);
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
       std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
       "\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    s += "<text x=\"" + px(0.5 * (f.left + f.right)) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" +
         detail::escape(opt.title) + "</text>\n";

  // axes and ticks
  s += "<rect x=\"" + px(f.left) + "\" y=\"" + px(f.top) + "\" width=\"" + px(f.right - f.left) + "\" height=\"" +
       px(f.bottom - f.top) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const double ts = detail::nice_step(f.t1 - f.t0);
  for (double t = std::ceil(f.t0 / ts - 1e-9) * ts; t <= f.t1 + 1e-9 * ts; t += ts) {
    const double x = f.px(t);
    s += "<line x1=\"" + px(x) + "\" y1=\"" + px(f.bottom) + "\" x2=\"" + px(x) + "\" y2=\"" + px(f.bottom + 5) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + px(x) + "\" y=\"" + px(f.bottom + 17) + "\" text-anchor=\"middle\">" + detail::label(t) +
         "</text>\n";
  }
  const double ys = detail::nice_step(f.y1 - f.y0);
  for (double y = std::ceil(f.y0 / ys - 1e-9) * ys; y <= f.y1 + 1e-9 * ys; y += ys) {
    const double yy = f.py(y);
    s += "<line x1=\"" + px(f.left - 5) + "\" y1=\"" + px(yy) + "\" x2=\"" + px(f.left) + "\" y2=\"" + px(yy) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + px(f.left - 8) + "\" y=\"" + px(yy + 4) + "\" text-anchor=\"end\">" + detail::label(y) +
         "</text>\n";
  }
  s += "<text x=\"" + px(0.5 * (f.left + f.right)) + "\" y=\"" + px(f.bottom + 34) +
       "\" text-anchor=\"middle\">t</text>\n";

  // series
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const auto y = tab.column(columns[k]);
    s += "<polyline data-column=\"" + detail::escape(columns[k]) + "\" fill=\"none\" stroke=\"" +
         palette[k % 7] + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < y.size(); ++i) s += (i ? " " : "") + px(f.px(tab.t[i])) + "," + px(f.py(y[i]));
    s += "\"/>\n";
  }

  // legend on top of the curves
  s += "<rect x=\"" + px(f.right - 116) + "\" y=\"" + px(f.top + 2) + "\" width=\"112\" height=\"" +
       px(14.0 * static_cast<double>(columns.size()) + 4.0) + "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#999\"/>\n";
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const double ly = f.top + 14.0 + 14.0 * static_cast<double>(k);
    s += "<line x1=\"" + px(f.right - 110) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(f.right - 90) + "\" y2=\"" +
         px(ly - 4) + "\" stroke=\"" + palette[k % 7] + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + px(f.right - 85) + "\" y=\"" + px(ly) + "\">" + detail::escape(columns[k]) + "</text>\n";
  }

  // footer: scenario identity
  const std::string hash = tab.meta_value("scenario-hash");
  const std::string method = tab.meta_value("method");
  s += "<text x=\"" + px(f.left) + "\" y=\"" + px(opt.height - 10.0) + "\" font-size=\"9\" fill=\"#555\">scenario " +
       (hash.empty() ? std::string("n/a") : hash) + (method.empty() ? "" : "  method " + detail::escape(method)) +
       "</text>\n";
  s += "</svg>\n";
  return s;
}

inline void emit_plot(const TimeSeriesTable& tab, const std::vector<std::string>& columns,
                      const std::filesystem::path& path, const PlotOptions& opt = {}) {
  atomic_write(path, render_svg(tab, columns, opt));
}

}  // namespace qcsim::io
