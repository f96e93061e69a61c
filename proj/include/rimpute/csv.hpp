#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rimpute/error.hpp"

namespace rimpute::csv {

/// Numeric table read from comma-separated text. Empty fields and `NA` read as
/// NaN; leading lines starting with '#' are provenance comments.
struct Table {
  std::vector<std::string> header;
  std::vector<std::string> comments;
  /// Column-major values, one vector per header entry.
  std::vector<Eigen::VectorXd> columns;

  Eigen::Index rows() const { return columns.empty() ? 0 : columns.front().size(); }

  std::size_t index_of(std::string_view name) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) return j;
    }
    detail::fail(ErrorKind::input_error, "no column named '" + std::string(name) + "'");
  }

  const Eigen::VectorXd& column(std::string_view name) const { return columns[index_of(name)]; }
};

namespace detail {

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  rimpute::detail::require(!quoted, ErrorKind::input_error, "unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_cell(std::string_view raw, std::size_t line_no, std::size_t col) {
  const std::string_view text = trim(raw);
  if (text.empty() || text == "NA") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const char* first = text.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, text.data() + text.size(), value);
  rimpute::detail::require(res.ec == std::errc() && res.ptr == text.data() + text.size() &&
                               std::isfinite(value),
                           ErrorKind::input_error,
                           "line " + std::to_string(line_no) + ", column " + std::to_string(col + 1) +
                               ": '" + std::string(text) + "' is not a number");
  return value;
}

}  // namespace detail

inline Table read(std::istream& in) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::vector<double>> cols;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.rfind('#', 0) == 0) {
        table.comments.push_back(line);
        continue;
      }
      if (detail::trim(line).empty()) continue;
      for (auto& name : detail::split_line(line)) table.header.emplace_back(detail::trim(name));
      cols.resize(table.header.size());
      have_header = true;
      continue;
    }
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_line(line);
    rimpute::detail::require(fields.size() == table.header.size(), ErrorKind::input_error,
                             "line " + std::to_string(line_no) + " has " +
                                 std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(table.header.size()));
    for (std::size_t j = 0; j < fields.size(); ++j) {
      cols[j].push_back(detail::parse_cell(fields[j], line_no, j));
    }
  }
  rimpute::detail::require(have_header, ErrorKind::input_error, "input has no header row");
  for (auto& c : cols) {
    table.columns.emplace_back(Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
  }
  return table;
}

/// Shortest representation that parses back to the same double; NaN is written
/// as an empty field.
inline std::string format_cell(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline std::string quote_if_needed(const std::string& name) {
  if (name.find_first_of(",\"") == std::string::npos) return name;
  std::string out = "\"";
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << c << '\n';
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j > 0) out << ',';
    out << quote_if_needed(table.header[j]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j > 0) out << ',';
      out << format_cell(table.columns[j][i]);
    }
    out << '\n';
  }
}

}  // namespace rimpute::csv
