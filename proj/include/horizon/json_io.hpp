#ifndef HORIZON_JSON_IO_HPP
#define HORIZON_JSON_IO_HPP

#include <json.hpp>

#include "horizon/cone.hpp"
#include "horizon/polyhedron.hpp"

namespace horizon {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

inline Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Index i = 0; i < m.rows(); ++i) j.push_back(to_json(Vector(m.row(i).transpose())));
  return j;
}

inline Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected finite number in vector");
    v(static_cast<Index>(i)) = j[i].get<double>();
    if (!std::isfinite(v(static_cast<Index>(i)))) throw ParseError("non-finite vector entry");
  }
  return v;
}

inline Matrix matrix_from_json(const Json& j, Index cols_hint = -1) {
  if (!j.is_array()) throw ParseError("expected array of rows");
  Index rows = static_cast<Index>(j.size());
  Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : std::max<Index>(cols_hint, 0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    Vector r = vector_from_json(j[static_cast<size_t>(i)]);
    if (r.size() != cols) throw ParseError("ragged matrix rows");
    m.row(i) = r.transpose();
  }
  return m;
}

inline Json to_json(const HPolyhedron& p) {
  return Json{{"A", to_json(p.A)}, {"b", to_json(p.b)}, {"E", to_json(p.E)},
              {"d", to_json(p.d)}};
}

inline HPolyhedron polyhedron_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("polyhedron: expected object");
  for (auto& [key, _] : j.items())
    if (key != "A" && key != "b" && key != "E" && key != "d")
      throw ParseError("polyhedron: unknown key '" + key + "'");
  HPolyhedron p;
  p.A = j.contains("A") ? matrix_from_json(j.at("A")) : Matrix(0, 0);
  p.b = j.contains("b") ? vector_from_json(j.at("b")) : Vector(0);
  p.E = j.contains("E") ? matrix_from_json(j.at("E"), p.A.cols()) : Matrix(0, p.A.cols());
  p.d = j.contains("d") ? vector_from_json(j.at("d")) : Vector(0);
  if (p.A.rows() != p.b.size() || p.E.rows() != p.d.size())
    throw ParseError("polyhedron: inconsistent row counts");
  if (p.A.rows() > 0 && p.E.rows() > 0 && p.A.cols() != p.E.cols())
    throw ParseError("polyhedron: inconsistent dimensions");
  return p;
}

inline Json to_json(const GenCone& c) {
  Json g = Json::array(), l = Json::array();
  for (const Vector& v : c.generators) g.push_back(to_json(v));
  for (const Vector& v : c.lineality) l.push_back(to_json(v));
  return Json{{"generators", g}, {"lineality", l}};
}

inline Json to_json(const ConeUnion& u) {
  Json pieces = Json::array();
  for (const GenCone& p : u.pieces) pieces.push_back(to_json(p));
  return Json{{"pieces", pieces}, {"empty", u.is_empty()}};
}

}  // namespace horizon

#endif  // HORIZON_JSON_IO_HPP
