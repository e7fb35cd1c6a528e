#ifndef QME_PROBLEM_IO_HPP
#define QME_PROBLEM_IO_HPP

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "json.hpp"

#include "qme/errors.hpp"
#include "qme/matrix.hpp"
#include "qme/problem.hpp"

namespace qme {

// Problem file schema (JSON object):
//
//   "B", "C"    required. Either an inline array of rows ([[1, 2], [3, 4]])
//               or a string path to a file in matrix text format. Relative
//               paths resolve against the directory of the problem file.
//   "A_tilde"   optional. Same payload forms, or a flat array taken as the
//               diagonal. When present, B and C are the unreduced
//               coefficients and the problem is reduced by A_tilde^{-1}.

namespace detail {

inline Matrix matrix_from_rows(const nlohmann::json& rows, const char* key) {
  const std::size_t r = rows.size();
  if (r == 0 || !rows[0].is_array() || rows[0].empty()) {
    throw ParseError(std::string("problem file: '") + key + "' must be a nonempty array of rows");
  }
  const std::size_t c = rows[0].size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != c) {
      throw ParseError(std::string("problem file: '") + key + "' has ragged rows");
    }
    for (const auto& x : row) {
      if (!x.is_number()) {
        throw ParseError(std::string("problem file: '") + key + "' has a non-numeric entry");
      }
      values.push_back(x.get<double>());
    }
  }
  return Matrix(r, c, std::move(values));
}

inline Matrix matrix_payload(const nlohmann::json& node, const char* key,
                             const std::filesystem::path& base_dir, bool allow_diagonal) {
  if (node.is_string()) {
    std::filesystem::path path(node.get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    return load_matrix(path.string());
  }
  if (node.is_array() && !node.empty() && node[0].is_array()) {
    return matrix_from_rows(node, key);
  }
  if (allow_diagonal && node.is_array() && !node.empty()) {
    std::vector<double> d;
    for (const auto& x : node) {
      if (!x.is_number()) {
        throw ParseError(std::string("problem file: '") + key + "' has a non-numeric entry");
      }
      d.push_back(x.get<double>());
    }
    return Matrix::diagonal(d);
  }
  throw ParseError(std::string("problem file: '") + key +
                   "' must be a matrix path or an array of rows");
}

}  // namespace detail

/// Parses a problem from JSON text. base_dir anchors relative matrix paths.
inline QmeProblem parse_problem(const std::string& text,
                                const std::filesystem::path& base_dir = ".") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("B") || !doc.contains("C")) {
    throw ParseError("problem file: expected an object with keys 'B' and 'C'");
  }
  Matrix b = detail::matrix_payload(doc["B"], "B", base_dir, false);
  Matrix c = detail::matrix_payload(doc["C"], "C", base_dir, false);
  if (doc.contains("A_tilde")) {
    Matrix a = detail::matrix_payload(doc["A_tilde"], "A_tilde", base_dir, true);
    return reduce(GeneralQme{std::move(a), std::move(b), std::move(c)});
  }
  return validate(b, c);
}

inline QmeProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_problem(text, path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace qme

#endif  // QME_PROBLEM_IO_HPP
