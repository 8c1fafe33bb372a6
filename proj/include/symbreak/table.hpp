#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symbreak/core.hpp"

namespace symbreak {

using Value = std::variant<long long, double, std::string>;

/// Homogeneous record set: every row has one value per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

enum class Format { Csv, Json, Svg };

inline std::string to_string(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    default: return "svg";
  }
}

/// Comma list "csv,json,svg" -> set of formats; unknown names are refused.
inline std::set<Format> parse_formats(const std::string& list) {
  std::set<Format> out;
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    std::string tok = list.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (tok == "csv")
      out.insert(Format::Csv);
    else if (tok == "json")
      out.insert(Format::Json);
    else if (tok == "svg")
      out.insert(Format::Svg);
    else if (!tok.empty())
      throw usage_error("unknown format '" + tok + "' (expected csv, json or svg)");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw usage_error("--formats needs at least one of csv, json, svg");
  return out;
}

namespace detail {

// 12 significant digits: double round-trips at this precision up to the last
// couple of ulps, which is the printed-precision contract of the tables.
inline std::string fmt12(double v) {
  if (!std::isfinite(v)) throw invalid_parameter("table: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

inline void check_homogeneous(const Table& t) {
  for (const auto& r : t.rows)
    if (r.size() != t.columns.size())
      throw invalid_parameter("table: row width differs from the column count");
}

}  // namespace detail

/// Header row plus one line per record; UTF-8, LF endings, 12 significant
/// digits. Zero rows still produce the header.
inline std::string render_csv(const Table& t) {
  detail::check_homogeneous(t);
  std::string s;
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) s += ',';
    s += detail::csv_escape(t.columns[i]);
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      if (auto* d = std::get_if<double>(&row[i]))
        s += detail::fmt12(*d);
      else if (auto* n = std::get_if<long long>(&row[i]))
        s += std::to_string(*n);
      else
        s += detail::csv_escape(std::get<std::string>(row[i]));
    }
    s += '\n';
  }
  return s;
}

/// Array of flat objects, one per record, same precision as the CSV.
inline std::string render_json(const Table& t) {
  detail::check_homogeneous(t);
  std::string s = "[";
  for (size_t r = 0; r < t.rows.size(); ++r) {
    s += r ? ",\n " : "\n ";
    s += '{';
    for (size_t i = 0; i < t.columns.size(); ++i) {
      if (i) s += ',';
      s += detail::json_escape(t.columns[i]);
      s += ':';
      const Value& v = t.rows[r][i];
      if (auto* d = std::get_if<double>(&v))
        s += detail::fmt12(*d);
      else if (auto* n = std::get_if<long long>(&v))
        s += std::to_string(*n);
      else
        s += detail::json_escape(std::get<std::string>(v));
    }
    s += '}';
  }
  s += t.rows.empty() ? "]\n" : "\n]\n";
  return s;
}

/// Render and write in one step. Only csv and json are table formats.
inline void write_table(const Table& t, Format format, const std::filesystem::path& path) {
  std::string content;
  if (format == Format::Csv)
    content = render_csv(t);
  else if (format == Format::Json)
    content = render_json(t);
  else
    throw invalid_parameter("write_table: svg is not a table format");
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw io_failure("write_table: cannot write " + path.string());
}

}  // namespace symbreak
