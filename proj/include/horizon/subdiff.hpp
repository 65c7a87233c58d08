#ifndef HORIZON_SUBDIFF_HPP
#define HORIZON_SUBDIFF_HPP

#include <vector>

#include "horizon/cone.hpp"
#include "horizon/expr.hpp"

namespace horizon {

// Outer estimate of the limiting subdifferential at a point: a finite union
// of polytopes (vertex lists) plus at most one polyhedral cone contributed
// by an indicator. For smooth, max-of-smooth, and smooth + indicator the
// representation is exact.
struct SubdiffPointSet {
  std::vector<std::vector<Vector>> polytopes;
  GenCone cone;
  bool exact = true;

  static SubdiffPointSet singleton(const Vector& g) {
    SubdiffPointSet s;
    s.polytopes.push_back({g});
    s.cone = GenCone::zero(g.size());
    return s;
  }

  bool is_singleton() const {
    return polytopes.size() == 1 && polytopes[0].size() == 1 && cone.is_zero();
  }

  std::vector<Vector> all_vertices() const {
    std::vector<Vector> out;
    for (const auto& p : polytopes) out.insert(out.end(), p.begin(), p.end());
    return out;
  }
};

inline double tie_band(double ref) { return 1e-9 * (1.0 + std::abs(ref)); }

namespace detail {

// s * c with structural zeros preserved, so an overflowed scale (s = inf)
// cannot turn a vanishing component into NaN.
inline Vector scale_keep_zero(double s, const Vector& c) {
  Vector g(c.size());
  for (Index i = 0; i < c.size(); ++i) g(i) = c(i) == 0.0 ? 0.0 : s * c(i);
  return g;
}

}  // namespace detail

inline SubdiffPointSet subdiff_at(const FuncExpr& f, const Vector& x);

namespace detail {

inline SubdiffPointSet minkowski_sum(const SubdiffPointSet& a, const SubdiffPointSet& b,
                                     Index n) {
  SubdiffPointSet out;
  out.exact = a.exact && b.exact;
  for (const auto& pa : a.polytopes)
    for (const auto& pb : b.polytopes) {
      std::vector<Vector> verts;
      for (const Vector& va : pa)
        for (const Vector& vb : pb) verts.push_back(va + vb);
      out.polytopes.push_back(std::move(verts));
    }
  out.cone = GenCone::zero(n);
  out.cone.generators = a.cone.generators;
  out.cone.generators.insert(out.cone.generators.end(), b.cone.generators.begin(),
                             b.cone.generators.end());
  out.cone.lineality = a.cone.lineality;
  out.cone.lineality.insert(out.cone.lineality.end(), b.cone.lineality.begin(),
                            b.cone.lineality.end());
  out.cone = canonicalize(out.cone);
  return out;
}

}  // namespace detail

inline SubdiffPointSet subdiff_at(const FuncExpr& f, const Vector& x) {
  const Index n = x.size();
  return std::visit(
      [&](const auto& node) -> SubdiffPointSet {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return SubdiffPointSet::singleton(node.c);
        } else if constexpr (std::is_same_v<T, QuadAtom>) {
          return SubdiffPointSet::singleton((node.Q + node.Q.transpose()) * x);
        } else if constexpr (std::is_same_v<T, ExpAffineAtom>) {
          double v = std::exp(node.c.dot(x) + node.beta);
          return SubdiffPointSet::singleton(detail::scale_keep_zero(v, node.c));
        } else if constexpr (std::is_same_v<T, PowerAbsAtom>) {
          double s = node.c.dot(x) + node.beta;
          if (node.p == 1.0 && std::abs(s) <= tie_band(s)) {
            SubdiffPointSet out;
            out.cone = GenCone::zero(n);
            out.polytopes.push_back({Vector(-node.c), node.c});
            return out;
          }
          double slope = node.p * std::pow(std::abs(s), node.p - 1.0) * (s < 0 ? -1.0 : 1.0);
          if (s == 0.0) slope = 0.0;
          return SubdiffPointSet::singleton(detail::scale_keep_zero(slope, node.c));
        } else if constexpr (std::is_same_v<T, NormAtom>) {
          double nrm = x.norm();
          if (nrm > 1e-12) return SubdiffPointSet::singleton(x / nrm);
          // Unit ball at the kink; boxed outer estimate.
          SubdiffPointSet out;
          out.cone = GenCone::zero(n);
          std::vector<Vector> verts;
          for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
            Vector v(n);
            for (Index i = 0; i < n; ++i) v(i) = (mask & (1ul << i)) ? 1.0 : -1.0;
            verts.push_back(v);
          }
          out.polytopes.push_back(std::move(verts));
          out.exact = false;
          return out;
        } else if constexpr (std::is_same_v<T, DistAtom>) {
          Vector pr = project_onto(node.P, x);
          double d = (x - pr).norm();
          if (d > 1e-10 * (1.0 + x.norm()))
            return SubdiffPointSet::singleton((x - pr) / d);
          GenCone nc = normal_cone_at(node.P, pr);
          if (nc.is_zero()) return SubdiffPointSet::singleton(Vector::Zero(n));
          // N cap unit ball, hulled through the unit generators (inner on
          // the circular boundary arcs).
          SubdiffPointSet out;
          out.cone = GenCone::zero(n);
          std::vector<Vector> verts = {Vector::Zero(n)};
          for (const Vector& g : nc.generators) verts.push_back(g);
          for (const Vector& l : nc.lineality) {
            verts.push_back(l);
            verts.push_back(-l);
          }
          out.polytopes.push_back(std::move(verts));
          out.exact = false;
          return out;
        } else if constexpr (std::is_same_v<T, IndicatorAtom>) {
          if (!node.P.contains(x)) throw NotInDomainError("subdiff_at: x outside indicator");
          SubdiffPointSet out;
          out.polytopes.push_back({Vector::Zero(n)});
          out.cone = normal_cone_at(node.P, x);
          return out;
        } else if constexpr (std::is_same_v<T, PwNode>) {
          double s = node.c.dot(x) + node.beta;
          return subdiff_at(s < 0.0 ? *node.left : *node.right, x);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          SubdiffPointSet acc;
          acc.polytopes.push_back({Vector::Zero(n)});
          acc.cone = GenCone::zero(n);
          int nonsmooth = 0;
          for (const FuncPtr& t : node.terms) {
            SubdiffPointSet part = subdiff_at(*t, x);
            // Cone parts merge freely; at most one proper polytope factor.
            if (!(part.polytopes.size() == 1 && part.polytopes[0].size() == 1)) ++nonsmooth;
            if (nonsmooth >= 2)
              throw UnsupportedError("subdiff_at: sum of two general nonsmooth parts");
            acc = detail::minkowski_sum(acc, part, n);
          }
          return acc;
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          SubdiffPointSet part = subdiff_at(*node.f, x);
          for (auto& poly : part.polytopes)
            for (Vector& v : poly) v *= node.alpha;
          // cone part is invariant under positive scaling
          return part;
        } else if constexpr (std::is_same_v<T, MaxNode>) {
          double best = eval(f, x);
          double band = tie_band(best);
          std::vector<Vector> verts;
          bool exact = true;
          for (const FuncPtr& b : node.branches) {
            if (eval(*b, x) < best - band) continue;
            SubdiffPointSet part = subdiff_at(*b, x);
            if (!part.cone.is_zero())
              throw UnsupportedError("subdiff_at: indicator inside max");
            exact = exact && part.exact;
            for (const auto& poly : part.polytopes)
              verts.insert(verts.end(), poly.begin(), poly.end());
          }
          SubdiffPointSet out;
          out.cone = GenCone::zero(n);
          out.polytopes.push_back(std::move(verts));
          out.exact = exact;
          return out;
        } else {
          static_assert(std::is_same_v<T, MinNode>);
          double best = eval(f, x);
          double band = tie_band(best);
          SubdiffPointSet out;
          out.cone = GenCone::zero(n);
          int active = 0;
          for (const FuncPtr& b : node.branches) {
            if (eval(*b, x) > best + band) continue;
            ++active;
            SubdiffPointSet part = subdiff_at(*b, x);
            if (!part.cone.is_zero())
              throw UnsupportedError("subdiff_at: indicator inside min");
            for (auto& poly : part.polytopes) out.polytopes.push_back(poly);
            out.exact = out.exact && part.exact;
          }
          // At ties the union is only an outer estimate of the limiting set.
          if (active > 1) out.exact = false;
          return out;
        }
      },
      f.node);
}

// Partial evaluation in the trailing block: g(x) = f(x, y_bar). Supports the
// separable-smooth grammar; norm/dist/indicator do not restrict.
inline FuncPtr restrict_tail(const FuncExpr& f, const Vector& ybar) {
  const Index m = ybar.size();
  return std::visit(
      [&](const auto& node) -> FuncPtr {
        using T = std::decay_t<decltype(node)>;
        const Index n = f.dim - m;
        if (n <= 0) throw UnsupportedError("restrict_tail: trailing block too large");
        if constexpr (std::is_same_v<T, AffineAtom>) {
          return affine(node.c.head(n), node.beta + node.c.tail(m).dot(ybar));
        } else if constexpr (std::is_same_v<T, QuadAtom>) {
          Matrix Qxx = node.Q.topLeftCorner(n, n);
          Vector lin = node.Q.topRightCorner(n, m) * ybar +
                       node.Q.bottomLeftCorner(m, n).transpose() * ybar;
          double cst = ybar.dot(node.Q.bottomRightCorner(m, m) * ybar);
          return sum({quad(Qxx), affine(lin, cst)});
        } else if constexpr (std::is_same_v<T, ExpAffineAtom>) {
          return exp_affine(node.c.head(n), node.beta + node.c.tail(m).dot(ybar));
        } else if constexpr (std::is_same_v<T, PowerAbsAtom>) {
          return power_abs(node.c.head(n), node.beta + node.c.tail(m).dot(ybar), node.p);
        } else if constexpr (std::is_same_v<T, PwNode>) {
          return pw(node.c.head(n), node.beta + node.c.tail(m).dot(ybar),
                    restrict_tail(*node.left, ybar), restrict_tail(*node.right, ybar));
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<FuncPtr> terms;
          for (const FuncPtr& t : node.terms) terms.push_back(restrict_tail(*t, ybar));
          return sum(std::move(terms));
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return scale(node.alpha, restrict_tail(*node.f, ybar));
        } else if constexpr (std::is_same_v<T, MaxNode>) {
          std::vector<FuncPtr> bs;
          for (const FuncPtr& b : node.branches) bs.push_back(restrict_tail(*b, ybar));
          return max_of(std::move(bs));
        } else if constexpr (std::is_same_v<T, MinNode>) {
          std::vector<FuncPtr> bs;
          for (const FuncPtr& b : node.branches) bs.push_back(restrict_tail(*b, ybar));
          return min_of(std::move(bs));
        } else {
          throw UnsupportedError("restrict_tail: atom does not restrict");
        }
      },
      f.node);
}

}  // namespace horizon

#endif  // HORIZON_SUBDIFF_HPP
