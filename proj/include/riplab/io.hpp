#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "riplab/core.hpp"
#include "riplab/errors.hpp"

namespace riplab {

// Text format for matrices and vectors: one CSV row per line, '.' decimal,
// no header. Readers infer dimensions and reject ragged rows.

namespace detail {

inline double parse_number(const std::string& field, int line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw format_error("csv: unparsable number '" + field + "' on line " +
                       std::to_string(line_no));
  if (!std::isfinite(value))
    throw format_error("csv: non-finite value on line " + std::to_string(line_no));
  return value;
}

}  // namespace detail

inline Mat read_csv_matrix(std::istream& in) {
  std::vector<Vec> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') blank = false;
    if (blank) continue;
    Vec row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      std::size_t a = field.find_first_not_of(" \t");
      std::size_t b = field.find_last_not_of(" \t");
      if (a == std::string::npos)
        throw format_error("csv: empty field on line " + std::to_string(line_no));
      row.push_back(detail::parse_number(field.substr(a, b - a + 1), line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw format_error("csv: ragged row on line " + std::to_string(line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw format_error("csv: no data");
  Mat m(int(rows.size()), int(rows.front().size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  return m;
}

// Accepts a single row or a single column.
inline Vec read_csv_vector(std::istream& in) {
  const Mat m = read_csv_matrix(in);
  if (m.rows != 1 && m.cols != 1)
    throw format_error("csv: expected a vector (one row or one column)");
  return m.a;
}

inline Mat read_csv_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open '" + path + "'");
  return read_csv_matrix(in);
}

inline Vec read_csv_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open '" + path + "'");
  return read_csv_vector(in);
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& out, const Mat& m) {
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_csv(std::ostream& out, const Vec& v) {
  Mat m(1, int(v.size()));
  m.a = v;
  write_csv(out, m);
}

}  // namespace riplab
