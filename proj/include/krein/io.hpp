#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "krein/densela.hpp"
#include "krein/error.hpp"
#include "krein/matrix.hpp"
#include "krein/space.hpp"

namespace krein::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
inline json matrix_to_json(const Matrix& m) {
  json data = json::array();
  for (const auto& x : m.data()) data.push_back(json::array({x.real(), x.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorKind::InvalidInput, "matrix object needs rows, cols and data");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw Error(ErrorKind::InvalidInput, "rows and cols must be nonnegative integers");
  const auto rows = j["rows"].get<std::size_t>();
  const auto cols = j["cols"].get<std::size_t>();
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != rows * cols)
    throw Error(ErrorKind::InvalidInput, "data length must equal rows * cols");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (const auto& entry : data) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      throw Error(ErrorKind::InvalidInput, "entries must be [re, im] number pairs");
    const double re = entry[0].get<double>();
    const double im = entry[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::InvalidInput, "non-finite matrix entry");
    m.data()[k++] = {re, im};
  }
  return m;
}

/// Operator plus optional fundamental symmetry (identity when absent) and
/// optional tolerance overrides.
struct Problem {
  std::optional<Matrix> J;
  Matrix op;
  std::optional<double> rank_tol;
  std::optional<double> residual_tol;

  Tolerance tolerance(Tolerance base = {}) const {
    if (rank_tol) base.rank_tol = *rank_tol;
    if (residual_tol) base.residual_tol = *residual_tol;
    base.validate();
    return base;
  }

  KreinSpace space(const Tolerance& tol) const {
    return J ? KreinSpace::make(*J, tol) : KreinSpace::hilbert(op.rows());
  }

  KOperator op_on_space(const Tolerance& tol) const {
    if (!op.is_square()) throw Error(ErrorKind::InvalidInput, "operator must be square, got " + op.shape_string());
    if (J && J->rows() != op.rows())
      throw Error(ErrorKind::InvalidInput, "J and operator dimensions differ");
    return KOperator(space(tol), op);
  }
};

inline Problem problem_from_json(const json& j) {
  if (!j.is_object() || !j.contains("operator")) throw Error(ErrorKind::InvalidInput, "problem needs an operator");
  Problem p;
  p.op = matrix_from_json(j["operator"]);
  if (j.contains("space")) {
    const auto& s = j["space"];
    if (!s.is_object() || !s.contains("J")) throw Error(ErrorKind::InvalidInput, "space must carry J");
    p.J = matrix_from_json(s["J"]);
    if (!p.J->is_square()) throw Error(ErrorKind::InvalidInput, "J must be square");
  }
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    if (t.contains("rank_tol")) p.rank_tol = t["rank_tol"].get<double>();
    if (t.contains("residual_tol")) p.residual_tol = t["residual_tol"].get<double>();
  }
  return p;
}

inline json problem_to_json(const Problem& p) {
  json j{{"operator", matrix_to_json(p.op)}};
  if (p.J) j["space"] = json{{"J", matrix_to_json(*p.J)}};
  if (p.rank_tol || p.residual_tol) {
    json t = json::object();
    if (p.rank_tol) t["rank_tol"] = *p.rank_tol;
    if (p.residual_tol) t["residual_tol"] = *p.residual_tol;
    j["tolerance"] = t;
  }
  return j;
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << j.dump(2) << '\n';
}

inline Matrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

inline Problem read_problem_file(const std::string& path) {
  try {
    return problem_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

}  // namespace krein::io
