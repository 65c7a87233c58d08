#ifndef HORIZON_RULES_HPP
#define HORIZON_RULES_HPP

#include "horizon/estimator.hpp"

namespace horizon {

// Sampling-level checks of the calculus inclusions at infinity. Each check
// estimates both sides independently and verifies the inclusion up to the
// clustering tolerance; this is a consistency test, not a proof.

namespace detail {

inline GenCone merge_cones(const GenCone& a, const GenCone& b) {
  GenCone c = GenCone::zero(a.dim);
  c.generators = a.generators;
  c.generators.insert(c.generators.end(), b.generators.begin(), b.generators.end());
  c.lineality = a.lineality;
  c.lineality.insert(c.lineality.end(), b.lineality.begin(), b.lineality.end());
  return canonicalize(c);
}

// Distance from v to the union over clusters c and cone pieces of c + cone.
inline double approx_set_distance(const SubdiffApprox& a, const Vector& v) {
  double best = kPlusInf;
  for (const Cluster& c : a.bounded_clusters)
    for (const GenCone& piece : a.singular_rays.pieces)
      best = std::min(best, cone_distance(piece, Vector(v - c.centroid)));
  return best;
}

// Distance from v to the Minkowski sum of the two approximations.
inline double minkowski_set_distance(const SubdiffApprox& a, const SubdiffApprox& b,
                                     const Vector& v) {
  double best = kPlusInf;
  for (const Cluster& ca : a.bounded_clusters)
    for (const Cluster& cb : b.bounded_clusters)
      for (const GenCone& pa : a.singular_rays.pieces)
        for (const GenCone& pb : b.singular_rays.pieces)
          best = std::min(best, cone_distance(merge_cones(pa, pb),
                                              Vector(v - ca.centroid - cb.centroid)));
  return best;
}

inline double incl_tol(double eps, const Vector& v) { return eps * (1.0 + v.norm()); }

}  // namespace detail

struct RuleReport {
  bool qualification = true;  // constraint qualification between the parts
  bool inclusion = true;      // every left-hand element found on the right
  double worst_gap = 0.0;
  SubdiffApprox lhs;
  std::vector<Vector> missing;  // witnesses violating the inclusion
};

// d(f1+f2)(inf; u) subset d f1 + d f2 (plus singular parts) under the
// no-opposition qualification on the singular cones.
inline RuleReport sum_rule_check(const FuncPtr& f1, const FuncPtr& f2, const Direction& u,
                                 const EstimatorParams& p = {}, double eps = 1e-3) {
  RuleReport rep;
  SubdiffApprox a1 = estimate_dir_subdiff(*f1, u, p);
  SubdiffApprox a2 = estimate_dir_subdiff(*f2, u, p);
  rep.lhs = estimate_dir_subdiff(*sum({f1, f2}), u, p);
  rep.qualification = !has_nontrivial_opposition(a1.singular_rays, a2.singular_rays);

  for (const Cluster& c : rep.lhs.bounded_clusters) {
    double d = detail::minkowski_set_distance(a1, a2, c.centroid);
    rep.worst_gap = std::max(rep.worst_gap, d);
    if (d > detail::incl_tol(eps, c.centroid)) {
      rep.inclusion = false;
      rep.missing.push_back(c.centroid);
    }
  }
  for (const GenCone& piece : rep.lhs.singular_rays.pieces)
    for (const Vector& g : piece.generators)
      if (!minkowski_member(a1.singular_rays, a2.singular_rays, g, 10.0 * eps)) {
        rep.inclusion = false;
        rep.missing.push_back(g);
      }
  return rep;
}

// d(max(f1,f2))(inf; u) subset union over lam in [0,1] of
// lam * d f1 + (1-lam) * d f2, where a zero weight contributes the singular
// cone of its part instead of a scaled subdifferential.
inline RuleReport max_rule_check(const FuncPtr& f1, const FuncPtr& f2, const Direction& u,
                                 const EstimatorParams& p = {}, double eps = 1e-3) {
  RuleReport rep;
  SubdiffApprox a1 = estimate_dir_subdiff(*f1, u, p);
  SubdiffApprox a2 = estimate_dir_subdiff(*f2, u, p);
  rep.lhs = estimate_dir_subdiff(*max_of({f1, f2}), u, p);

  auto base_points = [](const SubdiffApprox& a, double lam) {
    std::vector<Vector> pts;
    if (lam > 0.0) {
      for (const Cluster& c : a.bounded_clusters) pts.push_back(lam * c.centroid);
    } else {
      pts.push_back(Vector::Zero(a.direction.size()));
    }
    return pts;
  };

  for (const Cluster& c : rep.lhs.bounded_clusters) {
    double best = kPlusInf;
    for (int i = 0; i <= 10; ++i) {
      double lam = i / 10.0;
      for (const Vector& b1 : base_points(a1, lam))
        for (const Vector& b2 : base_points(a2, 1.0 - lam))
          for (const GenCone& p1 : a1.singular_rays.pieces)
            for (const GenCone& p2 : a2.singular_rays.pieces)
              best = std::min(best, cone_distance(detail::merge_cones(p1, p2),
                                                  Vector(c.centroid - b1 - b2)));
    }
    rep.worst_gap = std::max(rep.worst_gap, best);
    if (best > detail::incl_tol(eps, c.centroid)) {
      rep.inclusion = false;
      rep.missing.push_back(c.centroid);
    }
  }
  for (const GenCone& piece : rep.lhs.singular_rays.pieces)
    for (const Vector& g : piece.generators)
      if (!minkowski_member(a1.singular_rays, a2.singular_rays, g, 10.0 * eps)) {
        rep.inclusion = false;
        rep.missing.push_back(g);
      }
  return rep;
}

// d(min(f1,f2))(inf; u) subset d f1 union d f2 (outer estimate).
inline RuleReport min_rule_check(const FuncPtr& f1, const FuncPtr& f2, const Direction& u,
                                 const EstimatorParams& p = {}, double eps = 1e-3) {
  RuleReport rep;
  SubdiffApprox a1 = estimate_dir_subdiff(*f1, u, p);
  SubdiffApprox a2 = estimate_dir_subdiff(*f2, u, p);
  rep.lhs = estimate_dir_subdiff(*min_of({f1, f2}), u, p);

  for (const Cluster& c : rep.lhs.bounded_clusters) {
    double d = std::min(detail::approx_set_distance(a1, c.centroid),
                        detail::approx_set_distance(a2, c.centroid));
    rep.worst_gap = std::max(rep.worst_gap, d);
    if (d > detail::incl_tol(eps, c.centroid)) {
      rep.inclusion = false;
      rep.missing.push_back(c.centroid);
    }
  }
  for (const GenCone& piece : rep.lhs.singular_rays.pieces)
    for (const Vector& g : piece.generators)
      if (!cone_member(a1.singular_rays, g, 10.0 * eps) &&
          !cone_member(a2.singular_rays, g, 10.0 * eps)) {
        rep.inclusion = false;
        rep.missing.push_back(g);
      }
  return rep;
}

// Partial subdifferential of x -> f(x, y_bar) at infinity along u against the
// joint estimate along (u, 0): requires that no joint singular ray hides in
// the y-block alone, then checks that partial limits appear as x-blocks of
// joint limits.
struct PartialRuleReport {
  bool condition = true;  // no singular ray of the form (0, eta)
  bool inclusion = true;
  double worst_gap = 0.0;
  SubdiffApprox partial;
  SubdiffApprox joint;
};

inline PartialRuleReport partial_subdiff_check(const FuncPtr& f, const Vector& ybar,
                                               const Direction& u,
                                               const EstimatorParams& p = {},
                                               double eps = 1e-3) {
  PartialRuleReport rep;
  const Index n = u.dim();
  const Index m = ybar.size();
  FuncPtr g = restrict_tail(*f, ybar);
  rep.partial = estimate_dir_subdiff(*g, u, p);

  Vector w = Vector::Zero(n + m);
  w.head(n) = u.coords();
  rep.joint = estimate_dir_subdiff(*f, Direction(w), p);

  auto y_only = [&](const Vector& v) {
    return v.head(n).norm() <= 10.0 * eps && v.tail(m).norm() > 10.0 * eps;
  };
  for (const GenCone& piece : rep.joint.singular_rays.pieces) {
    for (const Vector& gen : piece.generators)
      if (y_only(gen)) rep.condition = false;
    for (const Vector& l : piece.lineality)
      if (y_only(l)) rep.condition = false;
  }

  // Project the joint approximation onto the x-block.
  SubdiffApprox proj;
  proj.direction = u.coords();
  for (const Cluster& c : rep.joint.bounded_clusters)
    proj.bounded_clusters.push_back({c.centroid.head(n), c.radius, c.count});
  proj.singular_rays.dim = n;
  for (const GenCone& piece : rep.joint.singular_rays.pieces) {
    GenCone q = GenCone::zero(n);
    for (const Vector& gen : piece.generators)
      if (gen.head(n).norm() > 10.0 * eps) q.generators.push_back(gen.head(n));
    for (const Vector& l : piece.lineality)
      if (l.head(n).norm() > 10.0 * eps) q.lineality.push_back(l.head(n));
    proj.singular_rays.pieces.push_back(canonicalize(q));
  }

  for (const Cluster& c : rep.partial.bounded_clusters) {
    double d = detail::approx_set_distance(proj, c.centroid);
    rep.worst_gap = std::max(rep.worst_gap, d);
    if (d > detail::incl_tol(eps, c.centroid)) rep.inclusion = false;
  }
  for (const GenCone& piece : rep.partial.singular_rays.pieces)
    for (const Vector& gen : piece.generators)
      if (!cone_member(proj.singular_rays, gen, 10.0 * eps)) rep.inclusion = false;
  return rep;
}

}  // namespace horizon

#endif  // HORIZON_RULES_HPP
