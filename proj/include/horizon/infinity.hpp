#ifndef HORIZON_INFINITY_HPP
#define HORIZON_INFINITY_HPP

#include <vector>

#include "horizon/polyhedron.hpp"

namespace horizon {

// One face of an H-polyhedron: active inequality rows, a witness point, and
// the face's recession cone.
struct FaceDescriptor {
  std::vector<Index> active_set;
  Vector witness;
  GenCone recession;
};

// V_{R,delta}(infinity; u): points of norm > R whose normalized position is
// within delta of u.
struct DirNeighborhood {
  Direction u;
  double radius = 100.0;
  double delta = 0.1;
};

inline bool in_dir_neighborhood(const DirNeighborhood& v, const Vector& z) {
  double nrm = z.norm();
  if (nrm <= v.radius) return false;
  return (z / nrm - v.u.coords()).norm() <= v.delta;
}

namespace detail {

// Face with prescribed active set J: {A_J x = b_J, A_j x <= b_j (j not in J),
// E x = d}. Returns a feasible point when the face is nonempty.
inline std::optional<Vector> face_point(const HPolyhedron& p, const std::vector<Index>& J) {
  std::vector<LinConstraint> cs;
  std::vector<bool> in_J(static_cast<size_t>(p.A.rows()), false);
  for (Index i : J) in_J[static_cast<size_t>(i)] = true;
  for (Index i = 0; i < p.A.rows(); ++i)
    cs.push_back({p.A.row(i).transpose(), p.b(i), in_J[static_cast<size_t>(i)]});
  for (Index i = 0; i < p.E.rows(); ++i)
    cs.push_back({p.E.row(i).transpose(), p.d(i), true});
  return lp_feasible(cs, p.dim());
}

inline GenCone face_recession(const HPolyhedron& p, const std::vector<Index>& J) {
  std::vector<bool> in_J(static_cast<size_t>(p.A.rows()), false);
  for (Index i : J) in_J[static_cast<size_t>(i)] = true;
  Matrix C(p.A.rows(), p.dim());
  Matrix D(static_cast<Index>(J.size()) + p.E.rows(), p.dim());
  Index di = 0;
  for (Index i = 0; i < p.A.rows(); ++i) {
    C.row(i) = p.A.row(i);
    if (in_J[static_cast<size_t>(i)]) D.row(di++) = p.A.row(i);
  }
  for (Index i = 0; i < p.E.rows(); ++i) D.row(di++) = p.E.row(i);
  return cone_from_halfspaces(C, D);
}

inline GenCone face_normal_cone(const HPolyhedron& p, const std::vector<Index>& J) {
  GenCone c = GenCone::zero(p.dim());
  for (Index i : J) c.generators.push_back(p.A.row(i).transpose());
  for (Index i = 0; i < p.E.rows(); ++i) c.lineality.push_back(p.E.row(i).transpose());
  return canonicalize(c);
}

}  // namespace detail

// All nonempty faces of p, keyed by inequality active set.
inline std::vector<FaceDescriptor> enumerate_faces(const HPolyhedron& p) {
  check_caps(p);
  const Index m = p.A.rows();
  std::vector<FaceDescriptor> faces;
  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<Index> J;
    for (Index i = 0; i < m; ++i)
      if (mask & (1ul << i)) J.push_back(i);
    auto pt = detail::face_point(p, J);
    if (!pt) continue;
    faces.push_back({J, *pt, detail::face_recession(p, J)});
  }
  return faces;
}

// Directional normal cone at infinity for an H-polyhedron. Faces whose
// recession cone contains u contribute pos of their active rows; any point
// x0 in such a face stays in it along x0 + k u while x0 + k u normalizes to
// u, so each contributed cone is attained, and active sets of points far out
// in direction u satisfy A_i u = 0, which bounds the search.
inline ConeUnion dir_normal_cone_at_infinity(const HPolyhedron& p, const Direction& u) {
  check_caps(p);
  if (p.is_empty()) throw EmptySetError();
  if (!in_recession_cone(p, u)) return ConeUnion::empty(p.dim());

  const Vector& uv = u.coords();
  std::vector<Index> zero_rows;
  for (Index i = 0; i < p.A.rows(); ++i)
    if (std::abs(p.A.row(i).dot(uv)) <= 1e-9) zero_rows.push_back(i);

  ConeUnion out;
  out.dim = p.dim();
  const size_t z = zero_rows.size();
  for (unsigned long mask = 0; mask < (1ul << z); ++mask) {
    std::vector<Index> J;
    for (size_t i = 0; i < z; ++i)
      if (mask & (1ul << i)) J.push_back(zero_rows[i]);
    if (!detail::face_point(p, J)) continue;
    if (!cone_member(detail::face_recession(p, J), uv, 1e-9)) continue;
    out.pieces.push_back(detail::face_normal_cone(p, J));
  }
  return simplify(out);
}

// Non-directional normal cone at infinity: union over unbounded faces.
inline ConeUnion normal_cone_at_infinity(const HPolyhedron& p) {
  check_caps(p);
  if (p.is_empty()) throw EmptySetError();
  if (recession_cone(p).is_zero()) throw BoundedSetError();

  ConeUnion out;
  out.dim = p.dim();
  for (const FaceDescriptor& f : enumerate_faces(p)) {
    if (f.recession.is_zero()) continue;
    out.pieces.push_back(detail::face_normal_cone(p, f.active_set));
  }
  return simplify(out);
}

struct NontrivialityReport {
  bool lhs = false;  // directional cone has a nonzero element
  bool rhs = false;  // u lies in the asymptotic cone of the boundary
  bool consistent = false;
};

// Checks the equivalence "N(infinity; u) != {0} iff u in (bd P)^infinity".
// For polyhedra with empty interior the boundary is the set itself.
inline NontrivialityReport nontriviality_check(const HPolyhedron& p, const Direction& u) {
  NontrivialityReport rep;
  rep.lhs = dir_normal_cone_at_infinity(p, u).has_nonzero();

  bool full_dim = p.E.rows() == 0;
  if (full_dim && p.A.rows() > 0) {
    // Interior test: A x <= b - eps feasible.
    std::vector<LinConstraint> cs;
    for (Index i = 0; i < p.A.rows(); ++i) {
      double margin = 1e-6 * (1.0 + std::abs(p.b(i))) * std::max(1.0, p.A.row(i).norm());
      cs.push_back({p.A.row(i).transpose(), p.b(i) - margin, false});
    }
    full_dim = lp_feasible(cs, p.dim()).has_value();
  }

  if (!full_dim) {
    rep.rhs = in_recession_cone(p, u);
  } else {
    // Proper faces carry the boundary; u must survive in some face's
    // recession cone.
    const Vector& uv = u.coords();
    for (Index i = 0; i < p.A.rows() && !rep.rhs; ++i) {
      std::vector<Index> J = {i};
      if (!detail::face_point(p, J)) continue;
      if (cone_member(detail::face_recession(p, J), uv, 1e-9)) rep.rhs = true;
    }
  }
  rep.consistent = rep.lhs == rep.rhs;
  return rep;
}

struct IntersectionRuleReport {
  bool qualification = false;  // N1(inf;u) cap -N2(inf;u) = {0}
  bool inclusion = false;      // N12(inf;u) subset N1(inf;u) + N2(inf;u)
  std::vector<Vector> witnesses;
};

// Checks the intersection rule: under the qualification the directional
// normal cone of P1 cap P2 sits inside the Minkowski sum. The inclusion is
// evaluated even when the qualification fails (informational).
inline IntersectionRuleReport intersection_rule_check(const HPolyhedron& p1,
                                                      const HPolyhedron& p2,
                                                      const Direction& u) {
  HPolyhedron both;
  both.A.resize(p1.A.rows() + p2.A.rows(), p1.dim());
  both.A << p1.A, p2.A;
  both.b.resize(p1.b.size() + p2.b.size());
  both.b << p1.b, p2.b;
  both.E.resize(p1.E.rows() + p2.E.rows(), p1.dim());
  both.E << p1.E, p2.E;
  both.d.resize(p1.d.size() + p2.d.size());
  both.d << p1.d, p2.d;

  ConeUnion n1 = dir_normal_cone_at_infinity(p1, u);
  ConeUnion n2 = dir_normal_cone_at_infinity(p2, u);
  ConeUnion n12 = dir_normal_cone_at_infinity(both, u);

  IntersectionRuleReport rep;
  rep.qualification = !has_nontrivial_opposition(n1, n2);

  rep.inclusion = true;
  for (const GenCone& piece : n12.pieces) {
    for (const Vector& g : piece.generators) {
      if (!minkowski_member(n1, n2, g, 1e-8)) {
        rep.inclusion = false;
        rep.witnesses.push_back(g);
      }
    }
    for (const Vector& l : piece.lineality) {
      for (double s : {1.0, -1.0}) {
        Vector v = s * l;
        if (!minkowski_member(n1, n2, v, 1e-8)) {
          rep.inclusion = false;
          rep.witnesses.push_back(v);
        }
      }
    }
  }
  return rep;
}

}  // namespace horizon

#endif  // HORIZON_INFINITY_HPP
