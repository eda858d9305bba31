#pragma once

#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "finslerlab/algebra.hpp"
#include "finslerlab/errors.hpp"
#include "finslerlab/phi.hpp"

namespace finslerlab {

/// Contents of a spec file: the reduced homogeneous data plus the metric family.
///
/// File layout (JSON):
///   {
///     "n": 2,
///     "metric": [1, 0, 0, 1],                      // row-major, or nested rows
///     "brackets": [{"i": 1, "j": 2, "k": 2, "coef": 1}],   // 1-based, i < j
///     "v": [0.5, 0],
///     "phi": {"family": "kropina", "m": 2}
///   }
/// `phi` is {"family": "kropina", "m": x} | {"family": "randers"} |
/// {"family": "polynomial", "coeffs": [...]}. Unknown fields are rejected.
struct SpecFile {
  HomogeneousSpec spec;
  PhiModel phi;
};

namespace detail {

using json = nlohmann::json;

inline std::size_t line_at_byte(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Line of the first occurrence of "key" in the document, 0 if absent.
inline std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_at_byte(text, pos);
}

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  SpecFile parse() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      const std::size_t line = line_at_byte(text_, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError("spec: malformed document at line " + std::to_string(line) + ": " +
                           e.what(),
                       line, "");
    }
    if (!doc.is_object()) fail("", "", "top level must be an object");
    reject_unknown(doc, {"n", "metric", "brackets", "v", "phi"}, "");

    const std::size_t n = parse_n(require(doc, "n", ""));
    Matrix metric = parse_metric(require(doc, "metric", ""), n);
    Vector v = parse_vector(require(doc, "v", ""), n, "v");
    std::vector<BracketEntry> entries;
    if (doc.contains("brackets")) entries = parse_brackets(doc.at("brackets"), n);
    PhiModel phi = parse_phi(require(doc, "phi", ""));

    return {HomogeneousSpec::from_entries(n, std::move(metric), entries, std::move(v)),
            std::move(phi)};
  }

 private:
  [[noreturn]] void fail(const std::string& path, std::string_view key, const std::string& msg) {
    const std::size_t line = key.empty() ? 0 : line_of_key(text_, key);
    std::ostringstream os;
    os << "spec: field '" << (path.empty() ? "<root>" : path) << "'";
    if (line) os << " (line " << line << ")";
    os << ": " << msg;
    throw ParseError(os.str(), line, path);
  }

  static std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
  }

  const json& require(const json& obj, const std::string& key, const std::string& parent) {
    if (!obj.contains(key)) fail(join(parent, key), "", "missing required field");
    return obj.at(key);
  }

  void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                      const std::string& parent) {
    for (const auto& [key, _] : obj.items())
      if (!allowed.count(key)) fail(join(parent, key), key, "unknown field");
  }

  double number(const json& x, const std::string& path, std::string_view key) {
    if (!x.is_number()) fail(path, key, "expected a number");
    return x.get<double>();
  }

  std::size_t parse_n(const json& x) {
    if (!x.is_number_integer() || x.get<long long>() <= 0)
      fail("n", "n", "expected a positive integer");
    return x.get<std::size_t>();
  }

  Matrix parse_metric(const json& x, std::size_t n) {
    if (!x.is_array()) fail("metric", "metric", "expected an array");
    std::vector<double> a;
    if (!x.empty() && x.front().is_array()) {
      if (x.size() != n) fail("metric", "metric", "expected " + std::to_string(n) + " rows");
      for (std::size_t i = 0; i < n; ++i) {
        const auto& row = x[i];
        const std::string path = "metric[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != n)
          fail(path, "metric", "expected a row of " + std::to_string(n) + " numbers");
        for (const auto& e : row) a.push_back(number(e, path, "metric"));
      }
    } else {
      if (x.size() != n * n)
        fail("metric", "metric", "expected " + std::to_string(n * n) + " entries (row-major)");
      for (std::size_t i = 0; i < x.size(); ++i)
        a.push_back(number(x[i], "metric[" + std::to_string(i) + "]", "metric"));
    }
    return Matrix(n, std::move(a));
  }

  Vector parse_vector(const json& x, std::size_t n, const std::string& name) {
    if (!x.is_array() || x.size() != n)
      fail(name, name, "expected an array of " + std::to_string(n) + " numbers");
    Vector out;
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(number(x[i], name + "[" + std::to_string(i) + "]", name));
    return out;
  }

  std::vector<BracketEntry> parse_brackets(const json& x, std::size_t n) {
    if (!x.is_array()) fail("brackets", "brackets", "expected an array of records");
    std::vector<BracketEntry> out;
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (std::size_t r = 0; r < x.size(); ++r) {
      const std::string path = "brackets[" + std::to_string(r) + "]";
      const auto& rec = x[r];
      if (!rec.is_object()) fail(path, "brackets", "expected a record {i, j, k, coef}");
      reject_unknown(rec, {"i", "j", "k", "coef"}, path);
      const auto index = [&](const char* key) -> std::size_t {
        const auto& e = require(rec, key, path);
        if (!e.is_number_integer() || e.get<long long>() < 1 ||
            e.get<long long>() > static_cast<long long>(n))
          fail(join(path, key), "brackets", "expected an integer in 1.." + std::to_string(n));
        return e.get<std::size_t>() - 1;
      };
      const std::size_t i = index("i"), j = index("j"), k = index("k");
      if (!(i < j)) fail(path, "brackets", "only entries with i < j are allowed");
      if (!seen.insert({i, j, k}).second) fail(path, "brackets", "duplicate (i, j, k) entry");
      out.push_back({i, j, k, number(require(rec, "coef", path), join(path, "coef"), "brackets")});
    }
    return out;
  }

  PhiModel parse_phi(const json& x) {
    if (!x.is_object()) fail("phi", "phi", "expected an object");
    const auto& fam = require(x, "family", "phi");
    if (!fam.is_string()) fail("phi.family", "family", "expected a string");
    const std::string name = fam.get<std::string>();
    try {
      if (name == "kropina") {
        reject_unknown(x, {"family", "m"}, "phi");
        return PhiModel::kropina(number(require(x, "m", "phi"), "phi.m", "m"));
      }
      if (name == "randers") {
        reject_unknown(x, {"family"}, "phi");
        return PhiModel::randers();
      }
      if (name == "polynomial") {
        reject_unknown(x, {"family", "coeffs"}, "phi");
        const auto& c = require(x, "coeffs", "phi");
        if (!c.is_array() || c.empty())
          fail("phi.coeffs", "coeffs", "expected a non-empty array of numbers");
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < c.size(); ++i)
          coeffs.push_back(number(c[i], "phi.coeffs[" + std::to_string(i) + "]", "coeffs"));
        return PhiModel::polynomial(std::move(coeffs));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      fail("phi", "phi", e.what());
    }
    fail("phi.family", "family", "unknown family '" + name + "'");
  }

  std::string_view text_;
};

}  // namespace detail

inline SpecFile parse_spec(std::string_view text) { return detail::SpecParser(text).parse(); }

inline SpecFile load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("spec: cannot open '" + path + "'", 0, "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace finslerlab
