#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "qcsim/error.hpp"

#ifndef QCSIM_VERSION
#define QCSIM_VERSION "dev"
#endif

namespace qcsim::io {

inline constexpr int kTableFormatVersion = 1;

/// 64-bit FNV-1a. Identification only (scenario and grid hashes), not security.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// 17 significant digits, scientific; enough to round-trip any double.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

/// Single-writer atomic replace: write next to the target, then rename over it.
inline void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw FormatError("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Rows of (t, values...). The metadata lines become the CSV comment block.
struct TimeSeriesTable {
  std::vector<std::string> columns;  // value columns, "t" excluded
  std::vector<std::string> units;    // one per value column
  std::vector<double> t;
  std::vector<std::vector<double>> rows;  // rows[i].size() == columns.size()
  std::vector<std::pair<std::string, std::string>> meta;  // key: value lines
  std::string scenario;  // normalized scenario dump, may be empty
  std::string written_by;  // library version read back from a file; output always uses the current one

  std::size_t column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("table has no column '" + name + "'");
  }
  bool has(const std::string& name) const {
    for (const auto& c : columns)
      if (c == name) return true;
    return false;
  }
  std::vector<double> column(const std::string& name) const {
    const std::size_t j = column_index(name);
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i][j];
    return v;
  }
  std::string meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return {};
  }

  void add_row(double time, std::vector<double> values) {
    if (values.size() != columns.size()) throw FormatError("row width does not match the column count");
    if (!t.empty() && !(time > t.back())) throw FormatError("table times must increase strictly");
    t.push_back(time);
    rows.push_back(std::move(values));
  }
};

/// CSV with a '#' comment block: format version, library version, metadata,
/// then the scenario dump, each line prefixed by "# | ".
inline std::string to_csv(const TimeSeriesTable& tab) {
  std::string s;
  s += "# qcsim-table " + std::to_string(kTableFormatVersion) + "\n";
  s += "# version: " QCSIM_VERSION "\n";
  for (const auto& [k, v] : tab.meta) s += "# " + k + ": " + v + "\n";
  if (!tab.units.empty()) {
    s += "# units: t=time";
    for (std::size_t i = 0; i < tab.columns.size(); ++i) s += " " + tab.columns[i] + "=" + tab.units[i];
    s += "\n";
  }
  if (!tab.scenario.empty()) {
    std::istringstream in(tab.scenario);
    std::string line;
    while (std::getline(in, line)) s += "# | " + line + "\n";
  }
  s += "t";
  for (const auto& c : tab.columns) s += "," + c;
  s += "\n";
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    s += format_number(tab.t[i]);
    for (double v : tab.rows[i]) s += "," + format_number(v);
    s += "\n";
  }
  return s;
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw FormatError("");
    return v;
  } catch (const std::exception&) {
    throw FormatError("line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

}  // namespace detail

inline TimeSeriesTable parse_csv(std::string_view text) {
  TimeSeriesTable tab;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false, versioned = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# qcsim-table ", 0) == 0) {
        const int v = std::atoi(line.c_str() + 14);
        if (v != kTableFormatVersion) throw FormatError("unsupported table format version " + std::to_string(v));
        versioned = true;
      } else if (line.rfind("# | ", 0) == 0) {
        tab.scenario += line.substr(4) + "\n";
      } else if (line.rfind("# units: ", 0) == 0) {
        tab.units.clear();
        for (const auto& kv : detail::split(line.substr(9), ' ')) {
          const auto eq = kv.find('=');
          if (eq != std::string::npos && kv.substr(0, eq) != "t") tab.units.push_back(kv.substr(eq + 1));
        }
      } else if (line.rfind("# version: ", 0) == 0) {
        tab.written_by = line.substr(11);
      } else {
        const auto colon = line.find(": ");
        if (colon != std::string::npos && line.size() > 2)
          tab.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (!header) {
      if (cells.empty() || detail::trim(cells[0]) != "t") throw FormatError("first CSV column must be 't'");
      for (std::size_t i = 1; i < cells.size(); ++i) tab.columns.push_back(detail::trim(cells[i]));
      header = true;
      continue;
    }
    if (cells.size() != tab.columns.size() + 1)
      throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(tab.columns.size() + 1) +
                        " fields, got " + std::to_string(cells.size()));
    std::vector<double> v(tab.columns.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::parse_double(detail::trim(cells[i + 1]), lineno);
    const double t = detail::parse_double(detail::trim(cells[0]), lineno);
    try {
      tab.add_row(t, std::move(v));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw FormatError("CSV has no header row");
  if (!versioned) throw FormatError("CSV lacks the '# qcsim-table' version line");
  if (!tab.units.empty() && tab.units.size() != tab.columns.size()) tab.units.clear();
  return tab;
}

inline TimeSeriesTable load_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

inline void save_csv(const TimeSeriesTable& tab, const std::filesystem::path& path) { atomic_write(path, to_csv(tab)); }

}  // namespace qcsim::io
