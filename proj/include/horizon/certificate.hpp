#ifndef HORIZON_CERTIFICATE_HPP
#define HORIZON_CERTIFICATE_HPP

#include "horizon/oracle.hpp"
#include "horizon/rules.hpp"
#include "horizon/sphere_grid.hpp"

namespace horizon {

// ---- Optimality at infinity ----------------------------------------------
//
// A direction u is excluded as a carrier of minimizing sequences when the
// estimated directional subdifferential stays away from zero. Finding zero
// inside the estimate is evidence (not proof) that minimizers leak along u.

struct OptimalityDirectionReport {
  Vector u;
  bool zero_in_estimate = false;
  double zero_distance = kPlusInf;
  double stability = 0.0;
  Verdict excluded = Verdict::Unknown;
};

inline OptimalityDirectionReport optimality_at_infinity_check(const FuncExpr& f,
                                                              const Direction& u,
                                                              const EstimatorParams& p = {},
                                                              double eps = 1e-3) {
  OptimalityDirectionReport rep;
  rep.u = u.coords();
  SubdiffApprox a = estimate_dir_subdiff(f, u, p);
  rep.stability = a.stability;
  rep.zero_distance = a.bounded_clusters.empty()
                          ? kPlusInf
                          : detail::approx_set_distance(a, Vector::Zero(u.dim()));
  rep.zero_in_estimate = rep.zero_distance <= eps;
  if (a.diagnostics.usable_samples < p.samples / 2)
    rep.excluded = Verdict::Unknown;
  else if (rep.zero_in_estimate)
    rep.excluded = Verdict::Fails;
  else if (a.stability >= 0.9 || a.bounded_clusters.empty())
    rep.excluded = Verdict::Holds;
  else
    rep.excluded = Verdict::Unknown;
  return rep;
}

// ---- Existence of minimizers ---------------------------------------------

struct ExistenceReport {
  Verdict verdict = Verdict::Unknown;
  Vector witness;  // escape direction when verdict == Fails
  Vector argmin;   // oracle minimizer when verdict == Holds
  double value = kPlusInf;
  std::vector<OptimalityDirectionReport> directions;
};

// Sweeps unit directions in the recession cone of the domain: a direction
// where zero enters the subdifferential estimate and an oracle ray search
// keeps descending toward the global infimum witnesses non-attainment.
inline ExistenceReport existence_certificate(const FuncPtr& f, int grid_res = 64,
                                             const EstimatorParams& p = {},
                                             double eps = 1e-3,
                                             unsigned long seed = 42) {
  ExistenceReport rep;
  const Index n = f->dim;
  std::optional<HPolyhedron> dom = detail::domain_polyhedron(*f);
  HPolyhedron domain = dom ? *dom : HPolyhedron::full_space(n);
  GenCone rec = recession_cone(domain);

  InfSearchResult inf = region_inf_search(*f, domain, 1e3, 12, seed);

  bool any_unknown = false;
  for (const Direction& u : sphere_grid(n, grid_res, seed)) {
    const Vector& uraw = u.coords();
    if (!cone_member(rec, uraw, 1e-7)) continue;
    OptimalityDirectionReport d = optimality_at_infinity_check(*f, u, p, eps);
    rep.directions.push_back(d);
    if (d.excluded == Verdict::Fails) {
      RaySearchResult rr = ray_inf_search(*f, inf.argmin, uraw);
      if (rr.at_far_end && rr.value <= inf.value + 1e-6 * (1.0 + std::abs(inf.value))) {
        rep.verdict = Verdict::Fails;
        rep.witness = uraw;
        rep.value = inf.value;
        return rep;
      }
      any_unknown = true;  // estimator flagged, oracle could not confirm
    } else if (d.excluded == Verdict::Unknown) {
      any_unknown = true;
    }
  }

  rep.argmin = inf.argmin;
  rep.value = inf.value;
  if (inf.improved_at_edge || any_unknown)
    rep.verdict = Verdict::Unknown;
  else
    rep.verdict = Verdict::Holds;
  return rep;
}

// ---- Attainment along a single ray ---------------------------------------

struct RayExistenceReport {
  Verdict verdict = Verdict::Unknown;
  bool orthogonal_singular_free = true;  // no singular ray orthogonal to u
  RaySearchResult oracle;
  SubdiffApprox approx;
};

// Sufficient condition for attainment of inf f(x0 + t u): the singular
// subdifferential along u meets the orthogonal complement of u only at zero.
// The oracle line search keeps the check honest in both directions.
inline RayExistenceReport ray_existence_check(const FuncPtr& f, const Vector& x0,
                                              const Direction& u,
                                              const EstimatorParams& p = {},
                                              double eps = 1e-3) {
  RayExistenceReport rep;
  rep.approx = estimate_dir_subdiff(*f, u, p);
  for (const GenCone& piece : rep.approx.singular_rays.pieces) {
    for (const Vector& g : piece.generators)
      if (std::abs(g.dot(u.coords())) <= 10.0 * eps) rep.orthogonal_singular_free = false;
    for (const Vector& l : piece.lineality)
      if (std::abs(l.dot(u.coords())) <= 10.0 * eps) rep.orthogonal_singular_free = false;
  }
  rep.oracle = ray_inf_search(*f, x0, u.coords());
  if (rep.oracle.at_far_end)
    rep.verdict = Verdict::Fails;
  else if (rep.orthogonal_singular_free)
    rep.verdict = Verdict::Holds;
  else
    rep.verdict = Verdict::Unknown;
  return rep;
}

// ---- Normal cone of a smooth constraint system at infinity ----------------

struct ConstraintConeReport {
  Verdict precondition = Verdict::Unknown;  // every constraint Lipschitz along u
  GenCone estimate;
  std::vector<int> active;  // indices of inequality constraints active at infinity
};

// Multiplier-style outer estimate: nonnegative combinations of inequality
// subgradient limits (for constraints whose values stay bounded along u) plus
// spans of equality subgradient limits.
inline ConstraintConeReport constraint_normal_cone_estimate(
    const std::vector<FuncPtr>& ineqs, const std::vector<FuncPtr>& eqs, const Direction& u,
    const EstimatorParams& p = {}) {
  ConstraintConeReport rep;
  const Index n = u.dim();
  rep.estimate = GenCone::zero(n);
  rep.precondition = Verdict::Holds;

  auto bounded_along = [&](const FuncExpr& g) {
    double R = p.r0 * std::pow(p.rho, p.rungs - 1);
    double v0 = eval(g, Vector(p.r0 * u.coords()));
    double v1 = eval(g, Vector(R * u.coords()));
    return std::isfinite(v1) && std::abs(v1) <= 10.0 * (1.0 + std::abs(v0));
  };

  int idx = 0;
  for (const FuncPtr& g : ineqs) {
    LipschitzReport lr = lipschitz_at_infinity_test(*g, u, p);
    if (lr.verdict == Verdict::Fails) rep.precondition = Verdict::Fails;
    else if (lr.verdict == Verdict::Unknown && rep.precondition == Verdict::Holds)
      rep.precondition = Verdict::Unknown;
    if (bounded_along(*g)) {
      rep.active.push_back(idx);
      for (const Cluster& c : lr.approx.bounded_clusters)
        if (c.centroid.norm() > 1e-9) rep.estimate.generators.push_back(c.centroid);
    }
    ++idx;
  }
  for (const FuncPtr& h : eqs) {
    LipschitzReport lr = lipschitz_at_infinity_test(*h, u, p);
    if (lr.verdict == Verdict::Fails) rep.precondition = Verdict::Fails;
    else if (lr.verdict == Verdict::Unknown && rep.precondition == Verdict::Holds)
      rep.precondition = Verdict::Unknown;
    for (const Cluster& c : lr.approx.bounded_clusters)
      if (c.centroid.norm() > 1e-9) rep.estimate.lineality.push_back(c.centroid);
  }
  rep.estimate = canonicalize(rep.estimate);
  return rep;
}

// ---- Error bound at infinity ---------------------------------------------

struct ErrorBoundReport {
  Verdict verdict = Verdict::Unknown;
  double alpha_cert = kPlusInf;  // 1 / (smallest slope at infinity over the sweep)
  double alpha_hat = 0.0;        // empirical modulus over the annulus
  Vector witness;
  std::vector<Vector> vanishing_slope_dirs;
};

// Certifies dist(x, Omega) <= alpha * max(g(x), 0) for large x: every swept
// direction with persistent positive residual must keep its subgradient
// limits away from zero; the reciprocal of the worst slope bounds alpha,
// cross-checked against the empirical modulus on [r_min, r_max].
inline ErrorBoundReport error_bound_certificate(const FuncPtr& g, const HPolyhedron& Omega,
                                                double r_min = 10.0, double r_max = 100.0,
                                                int grid_res = 64,
                                                const EstimatorParams& p = {},
                                                double eps = 1e-3,
                                                unsigned long seed = 42) {
  ErrorBoundReport rep;
  const Index n = Omega.dim();
  double min_slope = kPlusInf;
  bool any_relevant = false;

  for (const Direction& u : sphere_grid(n, grid_res, seed)) {
    const Vector& uraw = u.coords();
    // Relevant directions: the residual is eventually positive along u.
    double R = p.r0 * std::pow(p.rho, p.rungs - 1);
    double tail = eval(*g, Vector(R * uraw));
    if (!(std::isfinite(tail) && tail > eps)) continue;
    any_relevant = true;
    SubdiffApprox a = estimate_dir_subdiff(*g, u, p);
    for (const Cluster& c : a.bounded_clusters) {
      double s = c.centroid.norm();
      if (s <= eps) {
        rep.vanishing_slope_dirs.push_back(uraw);
        break;
      }
      min_slope = std::min(min_slope, s);
    }
  }

  try {
    ErrorBoundEstimate eb = empirical_error_bound(*g, Omega, r_min, r_max, 4000, seed);
    rep.alpha_hat = eb.alpha_hat;
    rep.witness = eb.witness;
  } catch (const NoViolatingSamplesError&) {
    rep.verdict = Verdict::Holds;  // residual never positive: bound is vacuous
    rep.alpha_cert = 0.0;
    return rep;
  }

  if (!rep.vanishing_slope_dirs.empty()) {
    rep.verdict = Verdict::Fails;
    return rep;
  }
  if (!any_relevant || !std::isfinite(min_slope)) {
    rep.verdict = Verdict::Unknown;
    return rep;
  }
  rep.alpha_cert = 1.0 / min_slope;
  rep.verdict = rep.alpha_hat <= rep.alpha_cert * (1.0 + 0.05) ? Verdict::Holds
                                                               : Verdict::Unknown;
  return rep;
}

}  // namespace horizon

#endif  // HORIZON_CERTIFICATE_HPP
