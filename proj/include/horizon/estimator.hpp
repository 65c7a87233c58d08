#ifndef HORIZON_ESTIMATOR_HPP
#define HORIZON_ESTIMATOR_HPP

#include <random>
#include <string>

#include "horizon/infinity.hpp"
#include "horizon/subdiff.hpp"

namespace horizon {

struct EstimatorParams {
  double r0 = 10.0;        // innermost radius rung
  double rho = 4.0;        // radius ratio between rungs
  int rungs = 8;           // rungs; classification uses the outer half
  double delta = 0.05;     // angular slack of the directional neighborhood
  int samples = 256;       // offset families per run
  double cluster_tol = 1e-3;
  double escape = 1e6;     // norm beyond which a trajectory counts as escaped
  unsigned long seed = 42;
};

struct Cluster {
  Vector centroid;
  double radius = 0.0;
  int count = 0;
};

struct EstimatorDiagnostics {
  int usable_samples = 0;
  int skipped_samples = 0;
  int unstable_samples = 0;
  int decisive = 0;
  int total_trajectories = 0;
  std::vector<std::string> notes;
};

// Outcome of sampling subgradients along trajectories x_k -> u * infinity.
// bounded_clusters approximates the directional limiting subdifferential,
// singular_rays the singular one (directions of unbounded subgradients under
// vanishing rescale).
struct SubdiffApprox {
  Vector direction;
  std::vector<Cluster> bounded_clusters;
  ConeUnion singular_rays;
  bool empty_bounded = true;
  double stability = 0.0;
  EstimatorDiagnostics diagnostics;
};

namespace detail {

inline void collect_indicators(const FuncExpr& f, std::vector<const HPolyhedron*>& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IndicatorAtom>) {
          out.push_back(&node.P);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          for (const FuncPtr& t : node.terms) collect_indicators(*t, out);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          collect_indicators(*node.f, out);
        } else if constexpr (std::is_same_v<T, MaxNode> || std::is_same_v<T, MinNode>) {
          for (const FuncPtr& b : node.branches) collect_indicators(*b, out);
        } else if constexpr (std::is_same_v<T, PwNode>) {
          collect_indicators(*node.left, out);
          collect_indicators(*node.right, out);
        }
      },
      f.node);
}

// Stacked domain polyhedron of all indicators, if any.
inline std::optional<HPolyhedron> domain_polyhedron(const FuncExpr& f) {
  std::vector<const HPolyhedron*> inds;
  collect_indicators(f, inds);
  if (inds.empty()) return std::nullopt;
  Index n = f.dim;
  Index mi = 0, me = 0;
  for (const HPolyhedron* P : inds) {
    mi += P->num_ineq();
    me += P->num_eq();
  }
  HPolyhedron D;
  D.A.resize(mi, n);
  D.b.resize(mi);
  D.E.resize(me, n);
  D.d.resize(me);
  Index ri = 0, re = 0;
  for (const HPolyhedron* P : inds) {
    for (Index i = 0; i < P->num_ineq(); ++i, ++ri) {
      D.A.row(ri) = P->A.row(i);
      D.b(ri) = P->b(i);
    }
    for (Index i = 0; i < P->num_eq(); ++i, ++re) {
      D.E.row(re) = P->E.row(i);
      D.d(re) = P->d(i);
    }
  }
  return D;
}

// Direction of a possibly overflowed subgradient: non-finite components
// dominate finite ones.
inline Vector safe_direction(const Vector& xi) {
  bool finite = true;
  for (Index i = 0; i < xi.size(); ++i)
    if (!std::isfinite(xi(i))) finite = false;
  if (finite) {
    // Pre-scale by the largest entry: squaring components near 1e200 would
    // overflow the norm.
    double m = xi.cwiseAbs().maxCoeff();
    if (m == 0.0) return Vector::Zero(xi.size());
    Vector d = xi / m;
    return d / d.norm();
  }
  Vector d = Vector::Zero(xi.size());
  for (Index i = 0; i < xi.size(); ++i)
    if (!std::isfinite(xi(i))) d(i) = xi(i) > 0 ? 1.0 : -1.0;
  return d / d.norm();
}

inline double safe_norm(const Vector& xi) {
  for (Index i = 0; i < xi.size(); ++i)
    if (!std::isfinite(xi(i))) return std::numeric_limits<double>::infinity();
  return xi.norm();
}

inline bool cones_match(const GenCone& a, const GenCone& b, double tol) {
  if (a.generators.size() != b.generators.size()) return false;
  if (a.lineality.size() != b.lineality.size()) return false;
  for (std::size_t i = 0; i < a.generators.size(); ++i)
    if ((a.generators[i] - b.generators[i]).norm() > tol) return false;
  for (std::size_t i = 0; i < a.lineality.size(); ++i)
    if ((a.lineality[i] - b.lineality[i]).norm() > tol) return false;
  return true;
}

enum class TrajClass { Bounded, Singular, Undecided };

struct TrajVerdict {
  TrajClass cls = TrajClass::Undecided;
  Vector value;  // limit (Bounded) or unit direction (Singular)
};

inline TrajVerdict classify_trajectory(const std::vector<Vector>& xi, int k0,
                                       const EstimatorParams& p) {
  const int K = static_cast<int>(xi.size());
  const Vector& last = xi[K - 1];
  double last_norm = safe_norm(last);

  bool finite_tail = std::isfinite(last_norm) && last_norm <= p.escape;
  for (int k = k0; k < K && finite_tail; ++k)
    if (safe_norm(xi[k]) > p.escape || !std::isfinite(safe_norm(xi[k]))) finite_tail = false;

  if (finite_tail) {
    bool settled = true;
    for (int k = k0; k < K; ++k)
      if ((xi[k] - last).norm() > p.cluster_tol * (1.0 + last_norm)) settled = false;
    if (settled) return {TrajClass::Bounded, last};

    // Slow geometric convergence (offsets decaying like R^{-1/4} produce it):
    // accept strictly shrinking gaps and extrapolate the limit (Aitken).
    std::vector<double> gaps;
    for (int k = k0; k + 1 < K; ++k) gaps.push_back((xi[k + 1] - xi[k]).norm());
    bool shrinking = gaps.size() >= 2;
    for (std::size_t i = 0; i + 1 < gaps.size() && shrinking; ++i)
      if (gaps[i + 1] > 0.95 * gaps[i] + 1e-15) shrinking = false;
    if (shrinking) {
      double theta =
          gaps[gaps.size() - 2] > 1e-300 ? gaps.back() / gaps[gaps.size() - 2] : 0.0;
      theta = std::min(theta, 0.95);
      Vector corr = (xi[K - 1] - xi[K - 2]) * (theta / (1.0 - theta));
      if (corr.norm() <= 0.2 * (1.0 + last_norm))
        return {TrajClass::Bounded, Vector(last + corr)};
    }
  }

  // Escape direction from the last rungs only: a trajectory can cross from
  // one growth regime into a faster one mid-ladder (polynomial overtaken by
  // exponential) and still have a clean limiting direction.
  Vector dir = safe_direction(last);
  bool dir_stable = dir.norm() > 0.5;
  for (int k = std::max(k0, K - 2); k < K && dir_stable; ++k)
    if ((safe_direction(xi[k]) - dir).norm() > 10.0 * p.cluster_tol) dir_stable = false;
  if (dir_stable) {
    bool growing = last_norm > p.escape;
    if (!growing) {
      growing = true;
      double gate = std::pow(p.rho, 0.25);
      for (int k = k0; k + 1 < K; ++k)
        if (!(safe_norm(xi[k + 1]) >= gate * safe_norm(xi[k]))) growing = false;
    }
    if (growing) return {TrajClass::Singular, dir};
  }
  return {TrajClass::Undecided, Vector()};
}

inline void add_to_clusters(std::vector<Cluster>& clusters, const Vector& v, double tol) {
  for (Cluster& c : clusters) {
    if ((v - c.centroid).norm() <= tol * (1.0 + c.centroid.norm())) {
      c.centroid = (c.centroid * c.count + v) / (c.count + 1);
      ++c.count;
      c.radius = std::max(c.radius, (v - c.centroid).norm());
      return;
    }
  }
  clusters.push_back({v, 0.0, 1});
}

inline void sort_clusters(std::vector<Cluster>& clusters) {
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    double na = a.centroid.norm(), nb = b.centroid.norm();
    if (std::abs(na - nb) > 1e-12) return na < nb;
    return lex_less(a.centroid, b.centroid);
  });
}

}  // namespace detail

// Samples subgradients along straight and curved escape families
// x = R u + R^a m e  (a in {0, 1/2, 3/4}) over a geometric radius ladder and
// classifies each matched trajectory as converging (bounded limit), escaping
// along a stable direction (singular ray), or undecided. Curved families are
// required: offsets growing slower than R still change the limit set.
template <typename SubdiffFn>
SubdiffApprox estimate_dir_subdiff(const FuncExpr& f, const Direction& u,
                                   const EstimatorParams& p, SubdiffFn&& sd) {
  const Index n = u.dim();
  const int K = p.rungs;
  const int k0 = K / 2;
  SubdiffApprox out;
  out.direction = u.coords();

  std::optional<HPolyhedron> dom = detail::domain_polyhedron(f);
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double exponents[3] = {0.0, 0.5, 0.75};

  std::vector<Vector> bounded_values;
  std::vector<Vector> singular_dirs;
  std::vector<GenCone> structural_cones;

  for (int j = 0; j < p.samples; ++j) {
    Vector e(n);
    for (Index i = 0; i < n; ++i) e(i) = gauss(rng);
    if (e.norm() < 1e-12) e(0) = 1.0;
    e.normalize();
    double mag = unif(rng) * p.delta * p.r0;
    double a = exponents[j % 3];

    // Per-rung expanded subgradient clouds and indicator cones.
    std::vector<std::vector<Vector>> cloud(K);
    std::vector<GenCone> cones(K, GenCone::zero(n));
    bool skipped = false;
    for (int k = 0; k < K && !skipped; ++k) {
      double R = p.r0 * std::pow(p.rho, k);
      Vector x = R * u.coords() + std::pow(R, a) * mag * e;
      if (dom && !dom->contains(x)) {
        try {
          x = project_onto(*dom, x);
        } catch (const Error&) {
          skipped = true;
          break;
        }
      }
      // Only the classification rungs must sit inside the directional
      // neighborhood; curved offsets may be relatively large early on.
      double xn = x.norm();
      if (k >= k0 && (xn < 0.5 * R || (x / xn - u.coords()).norm() > 1.5 * p.delta)) {
        skipped = true;
        break;
      }
      try {
        SubdiffPointSet s = sd(x);
        GenCone c = canonicalize(s.cone);
        std::vector<Vector> pts;
        for (const auto& poly : s.polytopes)
          for (const Vector& v : poly) {
            pts.push_back(v);
            for (const Vector& g : c.generators) {
              pts.push_back(v + 0.5 * g);
              pts.push_back(v + g);
            }
            for (const Vector& l : c.lineality) {
              pts.push_back(v + l);
              pts.push_back(v - l);
            }
          }
        std::sort(pts.begin(), pts.end(), detail::lex_less);
        cloud[k] = std::move(pts);
        cones[k] = std::move(c);
      } catch (const Error&) {
        skipped = true;
      }
    }
    if (skipped) {
      ++out.diagnostics.skipped_samples;
      continue;
    }
    ++out.diagnostics.usable_samples;

    bool cone_stable = true;
    for (int k = k0 + 1; k < K; ++k)
      if (!detail::cones_match(cones[k], cones[k0], 1e-7)) cone_stable = false;
    if (cone_stable && !cones[k0].is_zero()) structural_cones.push_back(cones[k0]);

    bool matched = true;
    for (int k = k0 + 1; k < K; ++k)
      if (cloud[k].size() != cloud[k0].size()) matched = false;
    const std::size_t width = cloud[K - 1].size();
    out.diagnostics.total_trajectories += static_cast<int>(width);
    if (!matched || !cone_stable) {
      ++out.diagnostics.unstable_samples;
      continue;
    }

    for (std::size_t t = 0; t < width; ++t) {
      std::vector<Vector> traj(K);
      for (int k = 0; k < K; ++k)
        traj[k] = k >= k0 ? cloud[k][t]
                          : (t < cloud[k].size() ? cloud[k][t] : cloud[k].back());
      detail::TrajVerdict v = detail::classify_trajectory(traj, k0, p);
      if (v.cls == detail::TrajClass::Bounded) {
        ++out.diagnostics.decisive;
        bounded_values.push_back(v.value);
      } else if (v.cls == detail::TrajClass::Singular) {
        ++out.diagnostics.decisive;
        singular_dirs.push_back(v.value);
      }
    }
  }

  std::sort(bounded_values.begin(), bounded_values.end(), detail::lex_less);
  for (const Vector& v : bounded_values)
    detail::add_to_clusters(out.bounded_clusters, v, p.cluster_tol);
  detail::sort_clusters(out.bounded_clusters);
  out.empty_bounded = out.bounded_clusters.empty();

  std::sort(singular_dirs.begin(), singular_dirs.end(), detail::lex_less);
  std::vector<Cluster> ray_clusters;
  for (const Vector& d : singular_dirs)
    detail::add_to_clusters(ray_clusters, d, 10.0 * p.cluster_tol);
  detail::sort_clusters(ray_clusters);

  ConeUnion rays;
  rays.dim = n;
  rays.pieces.push_back(GenCone::zero(n));
  for (const Cluster& c : ray_clusters) {
    GenCone g = GenCone::zero(n);
    g.generators.push_back(c.centroid.normalized());
    rays.pieces.push_back(canonicalize(g));
  }
  for (const GenCone& c : structural_cones) rays.pieces.push_back(c);
  out.singular_rays = simplify(rays);

  out.stability = out.diagnostics.total_trajectories > 0
                      ? static_cast<double>(out.diagnostics.decisive) /
                            out.diagnostics.total_trajectories
                      : 0.0;
  if (out.diagnostics.skipped_samples > 0)
    out.diagnostics.notes.push_back(std::to_string(out.diagnostics.skipped_samples) +
                                    " sample families left the directional neighborhood");
  return out;
}

inline SubdiffApprox estimate_dir_subdiff(const FuncExpr& f, const Direction& u,
                                          const EstimatorParams& p = {}) {
  return estimate_dir_subdiff(f, u, p,
                              [&](const Vector& x) { return subdiff_at(f, x); });
}

// Directional Lipschitz behavior at infinity: equivalent to a trivial singular
// subdifferential along the direction.
struct LipschitzReport {
  Verdict verdict = Verdict::Unknown;
  SubdiffApprox approx;
};

inline LipschitzReport lipschitz_at_infinity_test(const FuncExpr& f, const Direction& u,
                                                  const EstimatorParams& p = {}) {
  LipschitzReport rep;
  rep.approx = estimate_dir_subdiff(f, u, p);
  const SubdiffApprox& a = rep.approx;
  if (a.diagnostics.usable_samples < p.samples / 2) {
    rep.verdict = Verdict::Unknown;
    return rep;
  }
  if (a.singular_rays.has_nonzero()) {
    rep.verdict = Verdict::Fails;
    return rep;
  }
  rep.verdict = a.stability >= 0.9 ? Verdict::Holds : Verdict::Unknown;
  return rep;
}

// Subdifferential at infinity of the distance function to a polyhedron: for a
// bounded set it is the singleton {u}; otherwise the truncated directional
// normal cone joined with limits of unit exterior normals.
struct DistanceSubdiffReport {
  bool bounded_set = false;
  Vector u;
  ConeUnion normal_part;                 // intersect with the unit ball
  std::vector<Vector> exterior_normals;  // sampled unit limits from outside
};

inline DistanceSubdiffReport distance_subdiff_at_infinity(const HPolyhedron& P,
                                                          const Direction& u,
                                                          const EstimatorParams& p = {}) {
  DistanceSubdiffReport rep;
  rep.u = u.coords();
  GenCone rec = recession_cone(P);
  if (rec.is_zero()) {
    rep.bounded_set = true;
    return rep;
  }
  rep.normal_part = dir_normal_cone_at_infinity(P, u);
  FuncPtr f = dist(P);
  SubdiffApprox a = estimate_dir_subdiff(*f, u, p);
  for (const Cluster& c : a.bounded_clusters)
    if (std::abs(c.centroid.norm() - 1.0) <= 10.0 * p.cluster_tol)
      rep.exterior_normals.push_back(c.centroid.normalized());
  return rep;
}

}  // namespace horizon

#endif  // HORIZON_ESTIMATOR_HPP
