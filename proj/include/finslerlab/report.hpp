#pragma once

#include <algorithm>
#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/linalg.hpp"

namespace finslerlab {

/// Fixed report formatting: 9 significant digits, "%.9g".
inline std::string fmt9(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline std::string fmt_vector(std::span<const double> v, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt9(v[i]);
  }
  return out;
}

inline std::string csv_scalar(std::string_view label, double value) {
  return std::string(label) + "," + fmt9(value) + "\n";
}

/// `i,j,value` rows, 1-based indices, row-major.
inline std::string csv_matrix(const Matrix& m) {
  std::string out = "i,j,value\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + fmt9(m(i, j)) + "\n";
  return out;
}

inline std::string text_matrix(const Matrix& m, std::string_view indent = "    ") {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += indent;
    out += "[";
    for (std::size_t j = 0; j < m.size(); ++j) out += (j ? ", " : "") + fmt9(m(i, j));
    out += "]\n";
  }
  return out;
}

/// Reads back the matrices of a CSV report: every `i,j,value` header starts a
/// new matrix; `#` comment lines and blank lines are skipped.
inline std::vector<Matrix> parse_csv_matrices(std::string_view text) {
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, double>>> blocks;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "i,j,value") {
      blocks.emplace_back();
      continue;
    }
    if (blocks.empty()) continue;
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf", &i, &j, &v) != 3 || i == 0 || j == 0)
      throw InputError("csv: malformed matrix row '" + line + "'");
    blocks.back().emplace_back(i - 1, j - 1, v);
  }
  std::vector<Matrix> out;
  for (const auto& b : blocks) {
    std::size_t n = 0;
    for (const auto& [i, j, v] : b) n = std::max({n, i + 1, j + 1});
    Matrix m(n);
    for (const auto& [i, j, v] : b) m(i, j) = v;
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace finslerlab
