#pragma once

// Dataset files and report serialization for the command line tool.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kmedian/kmedian.hpp"

namespace kmedian::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

enum class Domain { string, clustering, ranking };

inline std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::string: return "string";
    case Domain::clustering: return "clustering";
    case Domain::ranking: return "ranking";
  }
  return "?";
}

inline Domain parse_domain(std::string_view name) {
  if (name == "string") return Domain::string;
  if (name == "clustering") return Domain::clustering;
  if (name == "ranking") return Domain::ranking;
  throw ConfigError("unknown domain '" + std::string(name) + "'");
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Lines without terminators; a final newline does not start a new line.
inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::string where(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

/// Groups of non-blank lines with their 1-based line numbers.
struct Block {
  std::vector<std::string> lines;
  std::vector<std::size_t> line_numbers;
};

inline std::vector<Block> blocks(const std::string& text) {
  std::vector<Block> out;
  bool open = false;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto t = trim(lines[i]);
    if (t.empty()) {
      open = false;
      continue;
    }
    if (!open) out.emplace_back();
    open = true;
    out.back().lines.emplace_back(t);
    out.back().line_numbers.push_back(i + 1);
  }
  return out;
}

inline std::vector<ObjectSet<std::string>> parse_strings(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() != ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no dataset files in '" + path.string() + "'");
  } else {
    files.push_back(path);
  }
  std::vector<ObjectSet<std::string>> out;
  for (const auto& f : files) {
    auto lines = split_lines(read_file(f));
    if (lines.empty()) throw DataError(f.string() + ": empty set");
    out.emplace_back(std::move(lines));
  }
  return out;
}

inline Labels parse_label_row(std::string_view row, const fs::path& path, std::size_t line) {
  Labels labels;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    const auto field = trim(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw DataError(where(path, line) + "invalid label '" + std::string(field) + "'");
    }
    labels.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return labels;
}

inline std::vector<ObjectSet<Labels>> parse_clusterings(const fs::path& path) {
  std::vector<ObjectSet<Labels>> out;
  for (const auto& b : blocks(read_file(path))) {
    std::vector<Labels> rows;
    for (std::size_t i = 0; i < b.lines.size(); ++i) {
      rows.push_back(parse_label_row(b.lines[i], path, b.line_numbers[i]));
      if (rows.back().size() != rows.front().size()) {
        throw DataError(where(path, b.line_numbers[i]) + "label vector length differs from the set's first row");
      }
    }
    out.emplace_back(std::move(rows));
  }
  if (out.empty()) throw DataError(path.string() + ": no sets");
  return out;
}

inline std::vector<ObjectSet<Ranking>> parse_rankings(const fs::path& path) {
  std::vector<ObjectSet<Ranking>> out;
  for (const auto& b : blocks(read_file(path))) {
    std::vector<Ranking> rows;
    std::vector<std::string> items;
    for (std::size_t i = 0; i < b.lines.size(); ++i) {
      try {
        rows.push_back(Ranking::parse(b.lines[i]));
      } catch (const DataError& e) {
        throw DataError(where(path, b.line_numbers[i]) + e.what());
      }
      auto these = rows.back().items();
      std::sort(these.begin(), these.end());
      if (i == 0) items = std::move(these);
      else if (these != items) throw DataError(where(path, b.line_numbers[i]) + "ranking covers a different item set");
    }
    out.emplace_back(std::move(rows));
  }
  if (out.empty()) throw DataError(path.string() + ": no sets");
  return out;
}

inline std::string serialize(const std::string& s) { return s; }
inline std::string serialize(const Ranking& r) { return r.str(); }
inline std::string serialize(const Labels& l) {
  std::string out;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(l[i]);
  }
  return out;
}

/// Sets separated by blank lines, one object per line.
template <class T>
std::string format_sets(const std::vector<std::vector<T>>& sets) {
  std::string out;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (s) out.push_back('\n');
    for (const auto& o : sets[s]) out += serialize(o) + "\n";
  }
  return out;
}

/// Rounds to 9 significant digits.
inline double sig9(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

/// Copies `value`, rounding every floating point number to 9 digits.
inline Json rounded(const Json& value) {
  if (value.is_number_float()) return sig9(value.get<double>());
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto& v : value) out.push_back(rounded(v));
    return out;
  }
  if (value.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : value.items()) out[k] = rounded(v);
    return out;
  }
  return value;
}

inline std::string csv_field(const Json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_number_float()) return format_number(v.get<double>());
  else if (v.is_array() || v.is_object()) s = v.dump();
  else return v.dump();
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

/// Header row from `columns`, then one row per record; a missing field is
/// left empty.
inline std::string to_csv(const std::vector<std::string>& columns, const Json& records) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (const auto& r : records) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out.push_back(',');
      if (r.contains(columns[c])) out += csv_field(r[columns[c]]);
    }
    out += "\n";
  }
  return out;
}

inline std::string to_json_text(const Json& document) { return rounded(document).dump(2) + "\n"; }

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

}  // namespace kmedian::io
