#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qcsim/io/table.hpp"

namespace qcsim::io {

struct ColumnStats {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double max_rel = 0.0;
  double mean_rel = 0.0;
};

struct TableComparison {
  std::vector<double> t;
  std::vector<ColumnStats> stats;
  std::vector<std::vector<double>> discrepancy;  // |a − b| per row, per compared column
  std::vector<double> correlation_norm;          // carried alongside when either input has it
  std::string correlation_source;                // "a", "b" or empty

  double max_abs() const {
    double m = 0.0;
    for (const auto& s : stats) m = std::max(m, s.max_abs);
    return m;
  }
  bool within(double tol) const { return max_abs() <= tol; }

  /// Per-row discrepancies as a table: d_<column>, then correlation_norm if present.
  TimeSeriesTable as_table() const {
    TimeSeriesTable tab;
    for (const auto& s : stats) {
      tab.columns.push_back("d_" + s.name);
      tab.units.push_back("abs");
    }
    if (!correlation_norm.empty()) {
      tab.columns.push_back("correlation_norm");
      tab.units.push_back("1");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<double> row;
      for (const auto& d : discrepancy) row.push_back(d[i]);
      if (!correlation_norm.empty()) row.push_back(correlation_norm[i]);
      tab.add_row(t[i], std::move(row));
    }
    return tab;
  }
};

struct CompareOptions {
  bool interpolate = false;  // linear interpolation of b onto a's times
  double time_tolerance = 1e-12;
};

namespace detail {

inline double interpolate_at(const std::vector<double>& t, const std::vector<double>& y, double x) {
  const auto it = std::lower_bound(t.begin(), t.end(), x);
  const auto j = static_cast<std::size_t>(it - t.begin());
  if (j < t.size() && t[j] == x) return y[j];
  if (j == 0 || j == t.size()) throw AlignmentError("time " + std::to_string(x) + " lies outside the other table");
  const double f = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return (1.0 - f) * y[j - 1] + f * y[j];
}

}  // namespace detail

/// Aligned-time discrepancies. Without interpolation the two time axes must
/// agree row by row; otherwise b is interpolated onto a's times.
inline TableComparison compare_tables(const TimeSeriesTable& a, const TimeSeriesTable& b,
                                      const std::vector<std::string>& columns, CompareOptions opt = {}) {
  if (!opt.interpolate) {
    if (a.t.size() != b.t.size())
      throw AlignmentError("tables have " + std::to_string(a.t.size()) + " and " + std::to_string(b.t.size()) +
                           " rows (use interpolation to compare different samplings)");
    for (std::size_t i = 0; i < a.t.size(); ++i)
      if (std::abs(a.t[i] - b.t[i]) > opt.time_tolerance * std::max(1.0, std::abs(a.t[i])))
        throw AlignmentError("time axes differ at row " + std::to_string(i));
  }
  TableComparison r;
  r.t = a.t;
  for (const auto& name : columns) {
    if (!a.has(name)) throw ConfigError("first table has no column '" + name + "'");
    if (!b.has(name)) throw ConfigError("second table has no column '" + name + "'");
    const auto ya = a.column(name);
    const auto yb = b.column(name);
    ColumnStats st;
    st.name = name;
    std::vector<double> d(ya.size());
    for (std::size_t i = 0; i < ya.size(); ++i) {
      const double vb = opt.interpolate ? detail::interpolate_at(b.t, yb, a.t[i]) : yb[i];
      d[i] = std::abs(ya[i] - vb);
      const double scale = std::max(std::abs(ya[i]), std::abs(vb));
      const double rel = scale > 0.0 ? d[i] / scale : 0.0;
      st.max_abs = std::max(st.max_abs, d[i]);
      st.max_rel = std::max(st.max_rel, rel);
      st.mean_abs += d[i];
      st.mean_rel += rel;
    }
    if (!d.empty()) {
      st.mean_abs /= static_cast<double>(d.size());
      st.mean_rel /= static_cast<double>(d.size());
    }
    r.stats.push_back(st);
    r.discrepancy.push_back(std::move(d));
  }
  // the correlation column is context for the discrepancy, not compared itself
  const bool in_cols = std::find(columns.begin(), columns.end(), "correlation_norm") != columns.end();
  if (!in_cols) {
    if (a.has("correlation_norm")) {
      r.correlation_norm = a.column("correlation_norm");
      r.correlation_source = "a";
    } else if (b.has("correlation_norm")) {
      const auto c = b.column("correlation_norm");
      for (double x : a.t) r.correlation_norm.push_back(detail::interpolate_at(b.t, c, x));
      r.correlation_source = "b";
    }
  }
  return r;
}

}  // namespace qcsim::io
