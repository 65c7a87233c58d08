#ifndef HORIZON_CONE_HPP
#define HORIZON_CONE_HPP

#include <algorithm>
#include <limits>
#include <vector>

#include "horizon/lp.hpp"
#include "horizon/types.hpp"

namespace horizon {

// Finitely generated convex cone pos{generators} + span{lineality}.
// The zero cone has no generators and no lineality.
struct GenCone {
  std::vector<Vector> generators;
  std::vector<Vector> lineality;
  Index dim = 0;

  static GenCone zero(Index n) {
    GenCone c;
    c.dim = n;
    return c;
  }
  static GenCone span(std::vector<Vector> basis, Index n) {
    GenCone c;
    c.dim = n;
    c.lineality = std::move(basis);
    return c;
  }

  bool is_zero() const { return generators.empty() && lineality.empty(); }
};

namespace detail {

inline bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a(i) < b(i) - 1e-14) return true;
    if (a(i) > b(i) + 1e-14) return false;
  }
  return a.size() < b.size();
}

inline Matrix stack_columns(const std::vector<Vector>& vecs, Index n) {
  Matrix M(n, static_cast<Index>(vecs.size()));
  for (size_t j = 0; j < vecs.size(); ++j) M.col(static_cast<Index>(j)) = vecs[j];
  return M;
}

}  // namespace detail

// Distance from v to the cone, by NNLS over [generators, +/-lineality].
inline double cone_distance(const GenCone& c, const Vector& v) {
  std::vector<Vector> cols = c.generators;
  for (const Vector& l : c.lineality) {
    cols.push_back(l);
    cols.push_back((-l).eval());
  }
  if (cols.empty()) return v.norm();
  return nnls_residual(detail::stack_columns(cols, c.dim), v);
}

inline bool cone_member(const GenCone& c, const Vector& v, double tol = kConeTol) {
  return cone_distance(c, v) <= tol;
}

// Generators unit-length, near-duplicates merged, lineality orthonormalized;
// rays falling inside span(lineality) are dropped. Makes cones comparable.
inline GenCone canonicalize(const GenCone& c) {
  GenCone out;
  out.dim = c.dim;

  // Orthonormal lineality basis.
  if (!c.lineality.empty()) {
    Matrix L = detail::stack_columns(c.lineality, c.dim);
    Eigen::ColPivHouseholderQR<Matrix> qr(L);
    qr.setThreshold(1e-10);
    Index r = qr.rank();
    Matrix Q = qr.householderQ() * Matrix::Identity(c.dim, r);
    for (Index j = 0; j < r; ++j) {
      Vector q = Q.col(j);
      // Fix sign for determinism: first nonzero entry positive.
      for (Index i = 0; i < q.size(); ++i) {
        if (std::abs(q(i)) > 1e-12) {
          if (q(i) < 0) q = -q;
          break;
        }
      }
      out.lineality.push_back(q);
    }
  }

  for (const Vector& g : c.generators) {
    double nrm = g.norm();
    if (nrm < 1e-13) continue;
    Vector gu = g / nrm;
    // Remove the lineality component; a ray inside the span adds nothing.
    Vector res = gu;
    for (const Vector& q : out.lineality) res -= q.dot(gu) * q;
    if (res.norm() < 1e-10) continue;
    bool dup = false;
    for (const Vector& h : out.generators) {
      if (h.dot(gu) > 1.0 - kDupCosTol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.generators.push_back(gu);
  }
  std::sort(out.generators.begin(), out.generators.end(), detail::lex_less);
  std::sort(out.lineality.begin(), out.lineality.end(), detail::lex_less);
  return out;
}

// Drops generators expressible by the remaining ones.
inline GenCone prune(const GenCone& c) {
  GenCone out = canonicalize(c);
  for (size_t i = 0; i < out.generators.size();) {
    GenCone rest = out;
    rest.generators.erase(rest.generators.begin() + static_cast<long>(i));
    if (cone_member(rest, out.generators[i], 1e-9))
      out.generators.erase(out.generators.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return out;
}

// Double description for the homogeneous cone {u | C u <= 0, D u = 0}.
// Starts from the full space and clips one constraint at a time, using the
// lineality space to absorb rows that cut it.
inline GenCone cone_from_halfspaces(const Matrix& C, const Matrix& D) {
  const Index n = C.cols() > 0 ? C.cols() : D.cols();
  if (n <= 0) throw DimensionLimitError("cone_from_halfspaces: empty system");
  if (n > kMaxDim) throw DimensionLimitError("cone_from_halfspaces: dimension cap exceeded");
  if (C.rows() + 2 * D.rows() > kMaxLpRows)
    throw DimensionLimitError("cone_from_halfspaces: row cap exceeded");

  GenCone cone;
  cone.dim = n;
  for (Index i = 0; i < n; ++i) cone.lineality.push_back(Vector::Unit(n, i));

  std::vector<Vector> rows;
  for (Index i = 0; i < C.rows(); ++i) rows.push_back(C.row(i).transpose());
  for (Index i = 0; i < D.rows(); ++i) {
    rows.push_back(D.row(i).transpose());
    rows.push_back((-D.row(i)).transpose());
  }

  const double tol = 1e-10;
  for (const Vector& a : rows) {
    if (a.norm() < 1e-13) continue;

    // If some lineality vector crosses the halfspace, pivot on it.
    Index piv = -1;
    double best = tol;
    for (size_t j = 0; j < cone.lineality.size(); ++j) {
      double d = std::abs(a.dot(cone.lineality[j]));
      if (d > best) {
        best = d;
        piv = static_cast<Index>(j);
      }
    }
    if (piv >= 0) {
      Vector l = cone.lineality[static_cast<size_t>(piv)];
      double al = a.dot(l);
      cone.lineality.erase(cone.lineality.begin() + piv);
      for (Vector& l2 : cone.lineality) l2 -= (a.dot(l2) / al) * l;
      for (Vector& r : cone.generators) r -= (a.dot(r) / al) * l;
      cone.generators.push_back(al > 0 ? Vector(-l) : l);
      continue;
    }

    std::vector<Vector> pos, zero, neg;
    for (const Vector& r : cone.generators) {
      double d = a.dot(r) / std::max(1.0, r.norm());
      if (d > tol)
        pos.push_back(r);
      else if (d < -tol)
        neg.push_back(r);
      else
        zero.push_back(r);
    }
    if (pos.empty()) continue;

    std::vector<Vector> next = zero;
    next.insert(next.end(), neg.begin(), neg.end());
    for (const Vector& p : pos)
      for (const Vector& m : neg) {
        Vector mix = a.dot(p) * m - a.dot(m) * p;
        if (mix.norm() > 1e-12) next.push_back(mix / mix.norm());
      }
    cone.generators = next;
    cone = prune(cone);
  }
  return prune(cone);
}

// Polar cone {y | <y,g> <= 0 for all generators, <y,l> = 0 for lineality}.
inline GenCone polar(const GenCone& c) {
  Matrix C(static_cast<Index>(c.generators.size()), c.dim);
  for (size_t i = 0; i < c.generators.size(); ++i)
    C.row(static_cast<Index>(i)) = c.generators[i].transpose();
  Matrix D(static_cast<Index>(c.lineality.size()), c.dim);
  for (size_t i = 0; i < c.lineality.size(); ++i)
    D.row(static_cast<Index>(i)) = c.lineality[i].transpose();
  if (C.rows() == 0) C.resize(0, c.dim);
  if (D.rows() == 0) D.resize(0, c.dim);
  return cone_from_halfspaces(C, D);
}

// Intersection via polarity: (C1 cap C2) = (C1° + C2°)°.
inline GenCone cone_intersection(const GenCone& a, const GenCone& b) {
  GenCone pa = polar(a), pb = polar(b);
  GenCone sum;
  sum.dim = a.dim;
  sum.generators = pa.generators;
  sum.generators.insert(sum.generators.end(), pb.generators.begin(), pb.generators.end());
  sum.lineality = pa.lineality;
  sum.lineality.insert(sum.lineality.end(), pb.lineality.begin(), pb.lineality.end());
  return polar(prune(sum));
}

// Finite union of finitely generated cones. The empty union is the empty
// set, which is distinct from the zero cone {0}.
struct ConeUnion {
  std::vector<GenCone> pieces;
  Index dim = 0;

  static ConeUnion empty(Index n) {
    ConeUnion u;
    u.dim = n;
    return u;
  }

  bool is_empty() const { return pieces.empty(); }

  bool has_nonzero() const {
    for (const GenCone& p : pieces)
      if (!p.is_zero()) return true;
    return false;
  }
};

inline bool cone_member(const ConeUnion& u, const Vector& v, double tol = kConeTol) {
  for (const GenCone& p : u.pieces)
    if (cone_member(p, v, tol)) return true;
  return false;
}

inline double cone_distance(const ConeUnion& u, const Vector& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const GenCone& p : u.pieces) best = std::min(best, cone_distance(p, v));
  return best;
}

// Dedupes pieces and drops pieces contained in another piece.
inline ConeUnion simplify(const ConeUnion& u) {
  ConeUnion out;
  out.dim = u.dim;
  std::vector<GenCone> pieces;
  for (const GenCone& p : u.pieces) pieces.push_back(prune(p));

  auto contained = [](const GenCone& a, const GenCone& b) {
    for (const Vector& g : a.generators)
      if (!cone_member(b, g, 1e-9)) return false;
    for (const Vector& l : a.lineality)
      if (!cone_member(b, l, 1e-9) || !cone_member(b, Vector(-l), 1e-9)) return false;
    return true;
  };
  for (size_t i = 0; i < pieces.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < pieces.size() && !drop; ++j) {
      if (i == j) continue;
      if (contained(pieces[i], pieces[j]) && !(contained(pieces[j], pieces[i]) && j > i))
        drop = true;
    }
    if (!drop) out.pieces.push_back(pieces[i]);
  }
  if (out.pieces.empty() && !u.pieces.empty()) out.pieces.push_back(GenCone::zero(u.dim));
  return out;
}

// v in (A + B) for single cones, by joint NNLS over both generator sets.
inline bool minkowski_member(const GenCone& a, const GenCone& b, const Vector& v,
                             double tol = kConeTol) {
  GenCone sum;
  sum.dim = a.dim;
  sum.generators = a.generators;
  sum.generators.insert(sum.generators.end(), b.generators.begin(), b.generators.end());
  sum.lineality = a.lineality;
  sum.lineality.insert(sum.lineality.end(), b.lineality.begin(), b.lineality.end());
  return cone_member(sum, v, tol);
}

// v in (U1 + U2) for unions: some pair of pieces covers v.
inline bool minkowski_member(const ConeUnion& u1, const ConeUnion& u2, const Vector& v,
                             double tol = kConeTol) {
  for (const GenCone& a : u1.pieces)
    for (const GenCone& b : u2.pieces)
      if (minkowski_member(a, b, v, tol)) return true;
  return false;
}

// True when U1 cap (-U2) contains a nonzero vector.
inline bool has_nontrivial_opposition(const ConeUnion& u1, const ConeUnion& u2) {
  for (const GenCone& a : u1.pieces)
    for (const GenCone& b : u2.pieces) {
      GenCone nb;
      nb.dim = b.dim;
      for (const Vector& g : b.generators) nb.generators.push_back(-g);
      nb.lineality = b.lineality;
      if (!cone_intersection(a, nb).is_zero()) return true;
    }
  return false;
}

}  // namespace horizon

#endif  // HORIZON_CONE_HPP
