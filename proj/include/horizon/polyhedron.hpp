#ifndef HORIZON_POLYHEDRON_HPP
#define HORIZON_POLYHEDRON_HPP

#include <optional>
#include <vector>

#include "horizon/cone.hpp"
#include "horizon/direction.hpp"
#include "horizon/lp.hpp"
#include "horizon/types.hpp"

namespace horizon {

// H-polyhedron {x | A x <= b, E x = d}. Emptiness is queryable, not an
// invariant.
struct HPolyhedron {
  Matrix A;  // m x n
  Vector b;
  Matrix E;  // p x n
  Vector d;

  Index dim() const { return A.cols() > 0 ? A.cols() : E.cols(); }
  Index num_ineq() const { return A.rows(); }
  Index num_eq() const { return E.rows(); }

  static HPolyhedron from_inequalities(const Matrix& A, const Vector& b) {
    HPolyhedron p;
    p.A = A;
    p.b = b;
    p.E.resize(0, A.cols());
    p.d.resize(0);
    return p;
  }

  static HPolyhedron from_system(const Matrix& A, const Vector& b, const Matrix& E,
                                 const Vector& d) {
    HPolyhedron p;
    p.A = A;
    p.b = b;
    p.E = E;
    p.d = d;
    return p;
  }

  static HPolyhedron from_equalities(const Matrix& E, const Vector& d) {
    HPolyhedron p;
    p.A.resize(0, E.cols());
    p.b.resize(0);
    p.E = E;
    p.d = d;
    return p;
  }

  static HPolyhedron full_space(Index n) {
    HPolyhedron p;
    p.A.resize(0, n);
    p.b.resize(0);
    p.E.resize(0, n);
    p.d.resize(0);
    return p;
  }

  bool contains(const Vector& x, double tol_scale = 1.0) const {
    double tol = tol_scale * activity_tol(x);
    for (Index i = 0; i < A.rows(); ++i)
      if (A.row(i).dot(x) > b(i) + tol) return false;
    for (Index i = 0; i < E.rows(); ++i)
      if (std::abs(E.row(i).dot(x) - d(i)) > tol) return false;
    return true;
  }

  std::vector<LinConstraint> constraints() const {
    std::vector<LinConstraint> cs;
    for (Index i = 0; i < A.rows(); ++i)
      cs.push_back({A.row(i).transpose(), b(i), false});
    for (Index i = 0; i < E.rows(); ++i)
      cs.push_back({E.row(i).transpose(), d(i), true});
    return cs;
  }

  std::optional<Vector> feasible_point() const { return lp_feasible(constraints(), dim()); }
  bool is_empty() const { return !feasible_point().has_value(); }
};

inline void check_caps(const HPolyhedron& p) {
  if (p.dim() > kMaxDim)
    throw DimensionLimitError("polyhedron dimension exceeds cap");
  if (p.num_ineq() + p.num_eq() > kMaxRows)
    throw DimensionLimitError("polyhedron row count exceeds cap");
}

// Recession cone {u | A u <= 0, E u = 0} in generator form; for a nonempty
// convex polyhedron this is the asymptotic cone.
inline GenCone recession_cone(const HPolyhedron& p) {
  check_caps(p);
  if (p.is_empty()) throw EmptySetError();
  return cone_from_halfspaces(p.A, p.E);
}

inline bool in_recession_cone(const HPolyhedron& p, const Direction& u, double tol = 1e-9) {
  const Vector& v = u.coords();
  for (Index i = 0; i < p.A.rows(); ++i)
    if (p.A.row(i).dot(v) > tol) return false;
  for (Index i = 0; i < p.E.rows(); ++i)
    if (std::abs(p.E.row(i).dot(v)) > tol) return false;
  return true;
}

// Limiting normal cone at a point of a polyhedron: pos of active inequality
// rows plus the span of the equality rows.
inline GenCone normal_cone_at(const HPolyhedron& p, const Vector& x) {
  double tol = activity_tol(x);
  for (Index i = 0; i < p.A.rows(); ++i)
    if (p.A.row(i).dot(x) > p.b(i) + tol)
      throw NotMemberError("normal_cone_at: point violates row " + std::to_string(i));
  for (Index i = 0; i < p.E.rows(); ++i)
    if (std::abs(p.E.row(i).dot(x) - p.d(i)) > tol)
      throw NotMemberError("normal_cone_at: point off equality row " + std::to_string(i));

  GenCone c = GenCone::zero(p.dim());
  for (Index i = 0; i < p.A.rows(); ++i)
    if (std::abs(p.A.row(i).dot(x) - p.b(i)) <= tol)
      c.generators.push_back(p.A.row(i).transpose());
  for (Index i = 0; i < p.E.rows(); ++i) c.lineality.push_back(p.E.row(i).transpose());
  return canonicalize(c);
}

// Exact Euclidean projection by enumerating candidate active sets and
// solving the equality-constrained least squares on each face.
inline Vector project_onto(const HPolyhedron& p, const Vector& z) {
  check_caps(p);
  const Index n = p.dim();
  const Index m = p.A.rows();
  double best = std::numeric_limits<double>::infinity();
  Vector best_y;

  for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
    std::vector<Index> act;
    for (Index i = 0; i < m; ++i)
      if (mask & (1ul << i)) act.push_back(i);
    Index k = static_cast<Index>(act.size()) + p.E.rows();

    Vector y;
    if (k == 0) {
      y = z;
    } else {
      // min ||y - z||^2 s.t. C y = c, via KKT.
      Matrix C(k, n);
      Vector c(k);
      for (size_t j = 0; j < act.size(); ++j) {
        C.row(static_cast<Index>(j)) = p.A.row(act[j]);
        c(static_cast<Index>(j)) = p.b(act[j]);
      }
      for (Index j = 0; j < p.E.rows(); ++j) {
        C.row(static_cast<Index>(act.size()) + j) = p.E.row(j);
        c(static_cast<Index>(act.size()) + j) = p.d(j);
      }
      Matrix K = Matrix::Zero(n + k, n + k);
      K.topLeftCorner(n, n) = Matrix::Identity(n, n);
      K.topRightCorner(n, k) = C.transpose();
      K.bottomLeftCorner(k, n) = C;
      Vector rhs(n + k);
      rhs.head(n) = z;
      rhs.tail(k) = c;
      Eigen::ColPivHouseholderQR<Matrix> qr(K);
      qr.setThreshold(1e-10);
      if (qr.rank() < n + k) continue;
      y = qr.solve(rhs).head(n);
    }
    if (!p.contains(y, 10.0)) continue;
    double dist = (y - z).norm();
    if (dist < best - 1e-12) {
      best = dist;
      best_y = y;
    }
  }
  if (!best_y.size()) throw EmptySetError();
  return best_y;
}

inline double distance_to(const HPolyhedron& p, const Vector& z) {
  return (project_onto(p, z) - z).norm();
}

}  // namespace horizon

#endif  // HORIZON_POLYHEDRON_HPP
