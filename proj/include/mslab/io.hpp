#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mslab/error.hpp"
#include "mslab/finite_quantale.hpp"
#include "mslab/law_report.hpp"
#include "mslab/order.hpp"
#include "mslab/relquant.hpp"
#include "mslab/subspace.hpp"
#include "mslab/topology.hpp"

namespace mslab {

using Json = nlohmann::json;

namespace detail {

// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string &text,
                                                    std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline std::string line_at(const std::string &text, std::size_t line) {
  std::istringstream is(text);
  std::string s;
  for (std::size_t i = 0; i < line && std::getline(is, s); ++i) {
  }
  return s;
}

[[noreturn]] inline void schema_error(const std::string &where,
                                      const std::string &what) {
  throw ParseError(where + ": " + what);
}

inline const Json &field(const Json &j, const std::string &key,
                         const std::string &where) {
  if (!j.is_object())
    schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end())
    schema_error(where, "missing field \"" + key + "\"");
  return *it;
}

inline std::size_t as_index(const Json &j, const std::string &where,
                            std::size_t bound) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    schema_error(where, "expected a nonnegative integer");
  const auto v = j.get<std::size_t>();
  if (v >= bound)
    schema_error(where, "index " + std::to_string(v) + " out of range (size " +
                            std::to_string(bound) + ")");
  return v;
}

inline const Json &as_array(const Json &j, const std::string &where,
                            std::optional<std::size_t> length = std::nullopt) {
  if (!j.is_array())
    schema_error(where, "expected an array");
  if (length && j.size() != *length)
    schema_error(where, "expected " + std::to_string(*length) + " entries, got " +
                            std::to_string(j.size()));
  return j;
}

inline bool as_flag(const Json &j, const std::string &where) {
  if (j.is_boolean())
    return j.get<bool>();
  if (j.is_number_integer() && (j.get<long long>() == 0 || j.get<long long>() == 1))
    return j.get<long long>() == 1;
  schema_error(where, "expected a boolean or 0/1");
}

inline std::vector<std::string> optional_names(const Json &j, std::size_t k,
                                               const std::string &where) {
  std::vector<std::string> names;
  if (!j.is_object() || !j.contains("names"))
    return names;
  const Json &a = as_array(j["names"], where + ".names", k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!a[i].is_string())
      schema_error(where + ".names[" + std::to_string(i) + "]", "expected a string");
    names.push_back(a[i].get<std::string>());
  }
  return names;
}

inline Relation relation_from_json(const Json &j, std::size_t k,
                                   const std::string &where) {
  as_array(j, where, k);
  Relation r(k);
  for (std::size_t a = 0; a < k; ++a) {
    const std::string row = where + "[" + std::to_string(a) + "]";
    as_array(j[a], row, k);
    for (std::size_t b = 0; b < k; ++b)
      r.set(a, b, as_flag(j[a][b], row + "[" + std::to_string(b) + "]"));
  }
  return r;
}

inline std::vector<PointSet> opens_from_json(const Json &j, std::size_t k,
                                             const std::string &where) {
  as_array(j, where);
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    as_array(j[i], w);
    PointSet s(k);
    for (std::size_t m = 0; m < j[i].size(); ++m)
      s.set(as_index(j[i][m], w + "[" + std::to_string(m) + "]", k));
    out.push_back(s);
  }
  return out;
}

inline Json set_to_json(const PointSet &s) {
  Json a = Json::array();
  for (std::size_t p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    a.push_back(p);
  return a;
}

} // namespace detail

/// Rounds to `digits` significant digits; reports pass every float through
/// this so output does not depend on the last bits of the arithmetic.
inline double round_sig(double v, int digits = 12) {
  if (v == 0.0 || !std::isfinite(v))
    return v == 0.0 ? 0.0 : v;
  std::ostringstream os;
  os.precision(digits);
  os << v;
  const double r = std::stod(os.str());
  return r == 0.0 ? 0.0 : r;
}

/// Parses JSON text. Syntax errors become ParseError naming `source`, the
/// line and column, and the offending line.
inline Json parse_json(const std::string &text, const std::string &source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = detail::line_col(text, offset);
    std::string msg = e.what();
    if (auto p = msg.find("parse error"); p != std::string::npos)
      msg = msg.substr(p);
    throw ParseError(source + ":" + std::to_string(line) + ":" +
                     std::to_string(col) + ": " + msg + "\n  " +
                     detail::line_at(text, line));
  }
}

inline Json load_json(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Matrices and subspaces: matrices are row-major arrays of [re, im] pairs.

inline ComplexMatrix matrix_from_json(const Json &j, std::size_t n,
                                      const std::string &where = "matrix") {
  detail::as_array(j, where, n * n);
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n * n; ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    detail::as_array(j[k], w, 2);
    if (!j[k][0].is_number() || !j[k][1].is_number())
      detail::schema_error(w, "expected [re, im] numbers");
    const double re = j[k][0].get<double>(), im = j[k][1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      detail::schema_error(w, "entries must be finite");
    m(Eigen::Index(k / n), Eigen::Index(k % n)) = Complex(re, im);
  }
  return m;
}

inline Json matrix_to_json(const ComplexMatrix &m) {
  // Entries at rounding-noise level are written as exact zeros.
  auto clean = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : round_sig(v); };
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      a.push_back({clean(m(i, j).real()), clean(m(i, j).imag())});
  return a;
}

inline Subspace subspace_from_json(const Json &j, Tolerance tol = {},
                                   const std::string &where = "subspace") {
  const Json &nj = detail::field(j, "n", where);
  if (!nj.is_number_integer() || nj.get<long long>() <= 0)
    detail::schema_error(where + ".n", "expected a positive integer");
  const auto n = nj.get<std::size_t>();
  const Json &gens = detail::as_array(detail::field(j, "generators", where),
                                      where + ".generators");
  std::vector<ComplexMatrix> ms;
  for (std::size_t i = 0; i < gens.size(); ++i)
    ms.push_back(
        matrix_from_json(gens[i], n, where + ".generators[" + std::to_string(i) + "]"));
  return canonicalize(n, ms, tol);
}

inline Json subspace_to_json(const Subspace &p) {
  Json gens = Json::array();
  for (const auto &b : p.basis())
    gens.push_back(matrix_to_json(b));
  return {{"n", p.ambient()}, {"dim", p.dim()}, {"generators", gens}};
}

// ---------------------------------------------------------------------------
// Quantales, lattices, spaces, groupoids

inline std::size_t size_field(const Json &j, const std::string &where) {
  const Json &s = detail::field(j, "size", where);
  if (!s.is_number_integer() || s.get<long long>() <= 0)
    detail::schema_error(where + ".size", "expected a positive integer");
  return s.get<std::size_t>();
}

inline FiniteQuantale quantale_from_json(const Json &j,
                                         const std::string &where = "quantale") {
  const std::size_t k = size_field(j, where);
  FiniteQuantale q;
  q.leq = detail::relation_from_json(detail::field(j, "leq", where), k, where + ".leq");
  const Json &prod = detail::as_array(detail::field(j, "prod", where), where + ".prod", k);
  q.prod.assign(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    const std::string row = where + ".prod[" + std::to_string(a) + "]";
    detail::as_array(prod[a], row, k);
    for (std::size_t b = 0; b < k; ++b)
      q.prod[a * k + b] =
          detail::as_index(prod[a][b], row + "[" + std::to_string(b) + "]", k);
  }
  const Json &inv = detail::as_array(detail::field(j, "inv", where), where + ".inv", k);
  for (std::size_t a = 0; a < k; ++a)
    q.inv.push_back(detail::as_index(inv[a], where + ".inv[" + std::to_string(a) + "]", k));
  if (j.contains("opens"))
    q.opens = detail::opens_from_json(j["opens"], k, where + ".opens");
  q.names = detail::optional_names(j, k, where);
  return q;
}

inline Json quantale_to_json(const FiniteQuantale &q) {
  const std::size_t k = q.size();
  Json leq = Json::array(), prod = Json::array();
  for (std::size_t a = 0; a < k; ++a) {
    Json lrow = Json::array(), prow = Json::array();
    for (std::size_t b = 0; b < k; ++b) {
      lrow.push_back(q.leq(a, b) ? 1 : 0);
      prow.push_back(q.mul(a, b));
    }
    leq.push_back(lrow);
    prod.push_back(prow);
  }
  Json j = {{"size", k}, {"leq", leq}, {"prod", prod}, {"inv", q.inv}};
  if (q.opens) {
    Json opens = Json::array();
    for (const auto &o : *q.opens)
      opens.push_back(detail::set_to_json(o));
    j["opens"] = opens;
  }
  if (!q.names.empty())
    j["names"] = q.names;
  return j;
}

inline FiniteLattice lattice_from_json(const Json &j,
                                       const std::string &where = "lattice") {
  const std::size_t k = size_field(j, where);
  Relation leq =
      detail::relation_from_json(detail::field(j, "leq", where), k, where + ".leq");
  return FiniteLattice(std::move(leq), detail::optional_names(j, k, where));
}

inline FiniteSpace space_from_json(const Json &j, const std::string &where = "space") {
  const Json &pts = detail::as_array(detail::field(j, "points", where), where + ".points");
  std::vector<std::string> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_string())
      detail::schema_error(where + ".points[" + std::to_string(i) + "]",
                           "expected a string");
    points.push_back(pts[i].get<std::string>());
  }
  auto opens = detail::opens_from_json(detail::field(j, "opens", where), points.size(),
                                       where + ".opens");
  return make_space(std::move(points), std::move(opens));
}

inline Json space_to_json(const FiniteSpace &x) {
  Json opens = Json::array();
  for (const auto &o : x.opens)
    opens.push_back(detail::set_to_json(o));
  return {{"points", x.points}, {"opens", opens}};
}

inline FiniteGroupoid groupoid_from_json(const Json &j,
                                         const std::string &where = "groupoid") {
  FiniteGroupoid g;
  const Json &objs = detail::as_array(detail::field(j, "objects", where), where + ".objects");
  for (std::size_t i = 0; i < objs.size(); ++i)
    g.objects.push_back(objs[i].is_string() ? objs[i].get<std::string>() : objs[i].dump());
  const Json &arrows = detail::as_array(detail::field(j, "arrows", where), where + ".arrows");
  const std::size_t m = arrows.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::string w = where + ".arrows[" + std::to_string(i) + "]";
    Arrow a;
    a.src = detail::as_index(detail::field(arrows[i], "src", w), w + ".src", g.objects.size());
    a.tgt = detail::as_index(detail::field(arrows[i], "tgt", w), w + ".tgt", g.objects.size());
    if (arrows[i].contains("id"))
      a.label = arrows[i]["id"].is_string() ? arrows[i]["id"].get<std::string>()
                                            : arrows[i]["id"].dump();
    g.arrows.push_back(std::move(a));
  }
  const Json &comp = detail::as_array(detail::field(j, "compose", where), where + ".compose", m);
  for (std::size_t h = 0; h < m; ++h) {
    const std::string row = where + ".compose[" + std::to_string(h) + "]";
    detail::as_array(comp[h], row, m);
    std::vector<std::optional<std::size_t>> r;
    for (std::size_t k = 0; k < m; ++k)
      r.push_back(comp[h][k].is_null()
                      ? std::nullopt
                      : std::optional<std::size_t>(detail::as_index(
                            comp[h][k], row + "[" + std::to_string(k) + "]", m)));
    g.compose.push_back(std::move(r));
  }
  const Json &inv = detail::as_array(detail::field(j, "inverse", where), where + ".inverse", m);
  for (std::size_t i = 0; i < m; ++i)
    g.inverse.push_back(detail::as_index(inv[i], where + ".inverse[" + std::to_string(i) + "]", m));
  return g;
}

inline Json groupoid_to_json(const FiniteGroupoid &g) {
  Json arrows = Json::array(), comp = Json::array();
  for (const auto &a : g.arrows)
    arrows.push_back({{"src", a.src}, {"tgt", a.tgt}, {"id", a.label}});
  for (const auto &row : g.compose) {
    Json r = Json::array();
    for (const auto &c : row)
      r.push_back(c ? Json(*c) : Json(nullptr));
    comp.push_back(r);
  }
  return {{"objects", g.objects}, {"arrows", arrows}, {"compose", comp},
          {"inverse", g.inverse}};
}

inline Json report_to_json(const LawReport &r) {
  Json a = Json::array();
  for (const auto &v : r.verdicts()) {
    Json o = {{"law", v.law}, {"passed", v.passed}};
    if (v.severity == Severity::informational)
      o["informational"] = true;
    if (!v.witness.empty())
      o["witness"] = v.witness;
    if (!v.detail.empty())
      o["detail"] = v.detail;
    a.push_back(o);
  }
  return a;
}

} // namespace mslab
