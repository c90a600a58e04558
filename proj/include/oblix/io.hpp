#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oblix/linalg.hpp"

namespace oblix::io {

using json = nlohmann::json;

namespace detail {

inline Real finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(Errc::parse_error, where + ": expected a number");
  const Real x = v.get<Real>();
  if (!std::isfinite(x)) throw Error(Errc::parse_error, where + ": non-finite value");
  return x;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

/// {"rows": m, "cols": n, "entries": [[re, im], ...]} in row-major order.
/// Plain numbers are accepted as real entries.
inline Matrix matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::parse_error, "matrix literal must be a JSON object");
  for (const char* key : {"rows", "cols", "entries"}) {
    if (!doc.contains(key)) throw Error(Errc::parse_error, std::string("missing field '") + key + "'");
  }
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer() || doc["rows"].get<Index>() < 0 ||
      doc["cols"].get<Index>() < 0) {
    throw Error(Errc::parse_error, "fields 'rows' and 'cols' must be nonnegative integers");
  }
  const auto rows = doc["rows"].get<Index>();
  const auto cols = doc["cols"].get<Index>();
  const json& entries = doc["entries"];
  if (!entries.is_array() || static_cast<Index>(entries.size()) != rows * cols) {
    throw Error(Errc::parse_error, "field 'entries' must hold rows*cols values");
  }
  Matrix m(rows, cols);
  for (Index k = 0; k < rows * cols; ++k) {
    const json& e = entries[static_cast<std::size_t>(k)];
    const std::string where = "entries[" + std::to_string(k) + "]";
    Complex z;
    if (e.is_array()) {
      if (e.size() != 2) throw Error(Errc::parse_error, where + ": expected [re, im]");
      z = Complex(detail::finite_number(e[0], where + "[0]"), detail::finite_number(e[1], where + "[1]"));
    } else {
      z = Complex(detail::finite_number(e, where), 0.0);
    }
    m(k / cols, k % cols) = z;
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

/// Real matrix, one row per line, comma separated. Blank lines and lines
/// starting with '#' are skipped.
inline Matrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<Real>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.back() == ',') {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": trailing empty field");
    }
    std::vector<Real> row;
    std::stringstream fields(t);
    std::string field;
    std::size_t field_no = 0;
    while (std::getline(fields, field, ',')) {
      ++field_no;
      const std::string f = detail::trim(field);
      char* end = nullptr;
      const Real v = std::strtod(f.c_str(), &end);
      const std::string where = "line " + std::to_string(line_no) + " field " + std::to_string(field_no);
      if (f.empty() || end != f.c_str() + f.size()) throw Error(Errc::parse_error, where + ": not a number");
      if (!std::isfinite(v)) throw Error(Errc::parse_error, where + ": non-finite value");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

/// JSON when the first non-blank character is '{', CSV otherwise.
inline Matrix parse_matrix(const std::string& text) {
  const std::string t = detail::trim(text);
  if (!t.empty() && t[0] == '{') {
    json doc;
    try {
      doc = json::parse(t);
    } catch (const json::parse_error& e) {
      throw Error(Errc::parse_error, std::string("malformed JSON at byte ") + std::to_string(e.byte));
    }
    return matrix_from_json(doc);
  }
  return matrix_from_csv(t);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_input, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Matrix load_matrix(const std::string& path) {
  try {
    return parse_matrix(read_file(path));
  } catch (const Error& e) {
    if (e.code() != Errc::parse_error) throw;
    throw Error(Errc::parse_error, path + ": " + e.detail());
  }
}

struct LoadedSubspace {
  Subspace subspace;
  Real correction = 0.0;  // ||B^* B - I|| of the columns as read
  bool reorthonormalized = false;
};

/// Columns span the subspace. Columns that are orthonormal within 1e-8 are
/// used as given; anything else is replaced by an orthonormal basis of
/// their span and flagged so that the caller can warn.
inline LoadedSubspace subspace_from_columns(const Matrix& columns, Tolerance tol = {}) {
  require_finite(columns, "subspace basis");
  LoadedSubspace out;
  if (columns.cols() == 0) {
    out.subspace = Subspace::zero(columns.rows(), tol);
    return out;
  }
  out.correction = (columns.adjoint() * columns - identity(columns.cols())).norm();
  if (out.correction <= 1e-8 && columns.cols() <= columns.rows()) {
    out.subspace = Subspace(columns, tol);
  } else {
    out.subspace = orthonormal_range(columns, tol);
    out.reorthonormalized = true;
  }
  return out;
}

inline LoadedSubspace load_subspace(const std::string& path, Tolerance tol = {}) {
  return subspace_from_columns(load_matrix(path), tol);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_input, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::invalid_input, "write to '" + path + "' failed");
}

}  // namespace oblix::io
