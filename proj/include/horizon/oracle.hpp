#ifndef HORIZON_ORACLE_HPP
#define HORIZON_ORACLE_HPP

#include <random>

#include "horizon/subdiff.hpp"

namespace horizon {

struct NoViolatingSamplesError : Error {
  using Error::Error;
};

// ---- Brute-force subgradient limits --------------------------------------
//
// Independent cross-check for the sampling estimator: walk explicit curve
// families x(t) = t u + t^a w outward along a long geometric ladder and
// record tail-converged subgradients (raw, unclustered) and escape
// directions.

struct BruteLimits {
  std::vector<Vector> bounded;
  std::vector<Vector> singular_dirs;
};

inline BruteLimits brute_limit_points(const FuncExpr& f, const Direction& u,
                                      const std::vector<Vector>& offsets,
                                      double t_max = 1e6, int ladder = 1000) {
  BruteLimits out;
  const double t0 = 10.0;
  const double step = std::pow(t_max / t0, 1.0 / (ladder - 1));
  const int tail = 8;
  for (const Vector& w : offsets) {
    for (double a : {0.0, 0.5, 0.75}) {
      std::vector<Vector> xs;
      bool ok = true;
      double t = t0;
      for (int i = 0; i < ladder && ok; ++i, t *= step) {
        Vector x = t * u.coords() + std::pow(t, a) * w;
        if (!in_domain(f, x)) {
          ok = false;
          break;
        }
        SubdiffPointSet s = subdiff_at(f, x);
        if (!(s.polytopes.size() == 1 && s.polytopes[0].size() == 1 && s.cone.is_zero())) {
          ok = false;  // only smooth trajectories feed the raw oracle
          break;
        }
        if (i >= ladder - tail) xs.push_back(s.polytopes[0][0]);
      }
      if (!ok || static_cast<int>(xs.size()) < tail) continue;
      const Vector& last = xs.back();
      double ln = last.norm();
      bool converged = std::isfinite(ln);
      for (const Vector& v : xs)
        if ((v - last).norm() > 1e-6 * (1.0 + ln)) converged = false;
      if (converged) {
        out.bounded.push_back(last);
        continue;
      }
      bool escaping = true;
      Vector dir(u.dim());
      {
        bool finite = true;
        for (Index i = 0; i < last.size(); ++i)
          if (!std::isfinite(last(i))) finite = false;
        dir = finite ? Vector(last / ln) : [&] {
          Vector d = Vector::Zero(last.size());
          for (Index i = 0; i < last.size(); ++i)
            if (!std::isfinite(last(i))) d(i) = last(i) > 0 ? 1.0 : -1.0;
          return Vector(d / d.norm());
        }();
      }
      for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double ni = xs[i].norm(), nj = xs[i + 1].norm();
        if (!(nj >= ni) && std::isfinite(nj)) escaping = false;
      }
      for (const Vector& v : xs) {
        double vn = v.norm();
        if (std::isfinite(vn) && vn > 0 && (v / vn - dir).norm() > 1e-3) escaping = false;
      }
      if (escaping && (!std::isfinite(ln) ||
                       (ln > 1e4 && ln >= 2.0 * xs.front().norm())))
        out.singular_dirs.push_back(dir);
    }
  }
  return out;
}

// Default offset palette: signed axes and axis pairs at several magnitudes.
inline std::vector<Vector> default_offsets(Index n) {
  std::vector<Vector> dirs;
  for (Index i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      Vector e = Vector::Zero(n);
      e(i) = 1.0;
      e(j) = 1.0;
      dirs.push_back(e / std::sqrt(2.0));
      e(j) = -1.0;
      dirs.push_back(e / std::sqrt(2.0));
    }
  std::vector<Vector> out;
  for (const Vector& d : dirs)
    for (double m : {0.25, 0.5, 1.0, 2.0}) out.push_back(m * d);
  return out;
}

// ---- Region infimum search ------------------------------------------------

struct InfSearchResult {
  double value = kPlusInf;
  Vector argmin;
  bool improved_at_edge = false;  // best point sits at the search-box radius
};

namespace detail {

// 1-D minimization of phi over [lo, hi] by golden-section; phi need only be
// unimodal near the optimum for refinement purposes.
template <typename Fn>
double golden_min(Fn&& phi, double lo, double hi, int iters = 80) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = phi(c), fd = phi(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = phi(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace detail

// Multistart projected coordinate descent over a polyhedral region, tracking
// whether the best point presses against the search-box boundary (a hint that
// the infimum is not attained inside the box).
inline InfSearchResult region_inf_search(const FuncExpr& f, const HPolyhedron& P,
                                         double box_radius = 1e3, int starts = 12,
                                         unsigned long seed = 42) {
  const Index n = P.dim();
  InfSearchResult res;
  std::optional<Vector> x0;
  try {
    x0 = P.feasible_point();
  } catch (const Error&) {
  }
  if (!x0) throw EmptySetError();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < starts; ++s) {
    Vector x = *x0;
    if (s > 0) {
      Vector noise(n);
      for (Index i = 0; i < n; ++i) noise(i) = gauss(rng);
      double scale = std::pow(10.0, (s % 4));
      x = project_onto(P, x + scale * noise);
    }
    double fx = eval(f, x);
    for (int pass = 0; pass < 60; ++pass) {
      double before = fx;
      for (Index i = 0; i < n; ++i) {
        Vector d = Vector::Zero(n);
        d(i) = 1.0;
        auto phi = [&](double t) {
          Vector y = project_onto(P, x + t * d);
          if (y.norm() > box_radius) y *= box_radius / y.norm();
          if (!P.contains(y, 10.0)) return kPlusInf;
          double v = eval(f, y);
          return std::isfinite(v) ? v : kPlusInf;
        };
        double span = box_radius;
        double t = detail::golden_min(phi, -span, span);
        // Narrow pass for local precision.
        t = detail::golden_min([&](double s2) { return phi(t + s2); }, -1.0, 1.0) + t;
        t = detail::golden_min([&](double s2) { return phi(t + s2); }, -1e-3, 1e-3) + t;
        Vector y = project_onto(P, x + t * d);
        if (y.norm() > box_radius) y *= box_radius / y.norm();
        double fy = eval(f, y);
        if (std::isfinite(fy) && fy < fx && P.contains(y, 10.0)) {
          x = y;
          fx = fy;
        }
      }
      if (before - fx <= 1e-14 * (1.0 + std::abs(before))) break;
    }
    if (fx < res.value) {
      res.value = fx;
      res.argmin = x;
      res.improved_at_edge = x.norm() >= 0.9 * box_radius;
    }
  }
  return res;
}

// Infimum of f along the ray x0 + t u, t >= 0.
struct RaySearchResult {
  double value = kPlusInf;
  double t = 0.0;
  bool at_far_end = false;  // infimum approached as t -> t_max
};

inline RaySearchResult ray_inf_search(const FuncExpr& f, const Vector& x0, const Vector& u,
                                      double t_max = 1e6) {
  RaySearchResult res;
  auto phi = [&](double t) {
    double v = eval(f, x0 + t * u);
    return std::isfinite(v) ? v : kPlusInf;
  };
  // Coarse geometric scan, then golden refinement around the best bracket.
  double best_t = 0.0, best_v = phi(0.0);
  std::vector<double> ts = {0.0};
  for (double t = 1e-3; t <= t_max; t *= 1.3) ts.push_back(t);
  for (double t : ts)
    if (double v = phi(t); v < best_v) {
      best_v = v;
      best_t = t;
    }
  double lo = best_t / 1.3, hi = std::min(best_t * 1.3 + 1e-3, t_max);
  double t = detail::golden_min(phi, lo, hi, 120);
  if (phi(t) < best_v) {
    best_v = phi(t);
    best_t = t;
  }
  res.value = best_v;
  res.t = best_t;
  res.at_far_end = best_t >= 0.9 * t_max ||
                   phi(t_max) <= best_v + 1e-12 * (1.0 + std::abs(best_v));
  return res;
}

// ---- Empirical error-bound modulus ---------------------------------------

struct ErrorBoundEstimate {
  double alpha_hat = 0.0;
  Vector witness;
  int violating_samples = 0;
};

// Largest observed ratio dist(x, Omega) / max(g(x), 0) over an annulus
// r_min <= ||x|| <= r_max, with golden refinement along the segment from the
// worst sample to its projection.
inline ErrorBoundEstimate empirical_error_bound(const FuncExpr& g, const HPolyhedron& Omega,
                                                double r_min, double r_max,
                                                int grid = 4000, unsigned long seed = 42) {
  const Index n = Omega.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ErrorBoundEstimate best;
  auto ratio_at = [&](const Vector& x) -> double {
    double res = eval(g, x);
    if (!std::isfinite(res) || res <= 1e-12) return -1.0;
    return distance_to(Omega, x) / res;
  };
  for (int i = 0; i < grid; ++i) {
    Vector d(n);
    for (Index k = 0; k < n; ++k) d(k) = gauss(rng);
    if (d.norm() < 1e-12) d(0) = 1.0;
    d.normalize();
    double r = r_min + unif(rng) * (r_max - r_min);
    Vector x = r * d;
    double q = ratio_at(x);
    if (q < 0) continue;
    ++best.violating_samples;
    if (q > best.alpha_hat) {
      best.alpha_hat = q;
      best.witness = x;
    }
  }
  if (best.violating_samples == 0)
    throw NoViolatingSamplesError("empirical_error_bound: no samples with positive residual");
  // Refine along the segment witness -> projection: the ratio typically peaks
  // as the residual vanishes.
  Vector pr = project_onto(Omega, best.witness);
  double t_best = detail::golden_min(
      [&](double t) {
        double q = ratio_at(best.witness + t * (pr - best.witness));
        return q < 0 ? 0.0 : -q;
      },
      0.0, 1.0, 100);
  double q = ratio_at(best.witness + t_best * (pr - best.witness));
  if (q > best.alpha_hat) {
    best.alpha_hat = q;
    best.witness = best.witness + t_best * (pr - best.witness);
  }
  return best;
}

}  // namespace horizon

#endif  // HORIZON_ORACLE_HPP
