#ifndef HORIZON_LP_HPP
#define HORIZON_LP_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "horizon/types.hpp"

namespace horizon {

// One dense linear constraint a.x (<= or ==) rhs.
struct LinConstraint {
  Vector a;
  double rhs = 0.0;
  bool equality = false;
};

// Phase-1 simplex feasibility for small dense systems. Free variables are
// split x = x+ - x-, slacks are added for inequalities, and the artificial
// objective is driven to zero with Bland's rule, so identical inputs give
// bit-identical outputs.
inline std::optional<Vector> lp_feasible(const std::vector<LinConstraint>& constraints,
                                         Index n) {
  if (n <= 0 || n > kMaxDim + kMaxDim)  // joint systems use up to 2n vars
    throw DimensionLimitError("lp_feasible: dimension out of range");
  if (static_cast<int>(constraints.size()) > kMaxLpRows)
    throw DimensionLimitError("lp_feasible: too many rows");

  const Index m = static_cast<Index>(constraints.size());
  if (m == 0) return Vector::Zero(n);

  const Index n_slack =
      static_cast<Index>(std::count_if(constraints.begin(), constraints.end(),
                                       [](const LinConstraint& c) { return !c.equality; }));
  const Index n_struct = 2 * n + n_slack;
  const Index n_total = n_struct + m;  // + artificials

  // Tableau rows: [A | rhs], basis starts on the artificials.
  Matrix T = Matrix::Zero(m, n_total + 1);
  Index slack = 0;
  for (Index i = 0; i < m; ++i) {
    const LinConstraint& c = constraints[i];
    if (c.a.size() != n) throw DimensionLimitError("lp_feasible: row size mismatch");
    double sign = c.rhs < 0.0 ? -1.0 : 1.0;
    T.row(i).head(n) = sign * c.a.transpose();
    T.row(i).segment(n, n) = -sign * c.a.transpose();
    if (!c.equality) {
      T(i, 2 * n + slack) = sign;
      ++slack;
    }
    T(i, n_struct + i) = 1.0;
    T(i, n_total) = sign * c.rhs;
  }

  std::vector<Index> basis(m);
  for (Index i = 0; i < m; ++i) basis[i] = n_struct + i;

  // Reduced costs for minimizing the sum of artificials.
  Vector cost = Vector::Zero(n_total);
  cost.tail(m).setConstant(1.0);
  Vector red = cost;
  double obj = 0.0;
  for (Index i = 0; i < m; ++i) {
    red -= T.row(i).head(n_total);
    obj -= T(i, n_total);
  }

  const double piv_tol = 1e-11;
  const int max_iters = 20000;
  for (int iter = 0; iter < max_iters; ++iter) {
    // Bland: entering = lowest index with negative reduced cost.
    Index enter = -1;
    for (Index j = 0; j < n_total; ++j) {
      if (red(j) < -1e-10) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Index leave = -1;
    double best_ratio = 0.0;
    for (Index i = 0; i < m; ++i) {
      double a = T(i, enter);
      if (a > piv_tol) {
        double ratio = T(i, n_total) / a;
        if (leave < 0 || ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded in phase 1 cannot happen; bail out

    double piv = T(leave, enter);
    if (std::abs(piv) < piv_tol)
      throw NumericalFailure("lp_feasible: pivot magnitude below 1e-11");
    T.row(leave) /= piv;
    for (Index i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    double f = red(enter);
    red -= f * T.row(leave).head(n_total);
    obj -= f * T(leave, n_total);
    basis[leave] = enter;
  }

  double scale = 1.0;
  for (const auto& c : constraints) scale = std::max(scale, std::abs(c.rhs));
  if (std::abs(obj) > 1e-8 * scale) return std::nullopt;

  Vector xpm = Vector::Zero(n_total);
  for (Index i = 0; i < m; ++i) xpm(basis[i]) = T(i, n_total);
  Vector x = xpm.head(n) - xpm.segment(n, n);
  return x;
}

// Nonnegative least squares min ||A l - v||, l >= 0 (Lawson-Hanson).
// Returns the residual norm; coefficients go to *coeffs when requested.
inline double nnls_residual(const Matrix& A, const Vector& v, Vector* coeffs = nullptr) {
  const Index nc = A.cols();
  Vector x = Vector::Zero(nc);
  if (nc == 0) {
    if (coeffs) *coeffs = x;
    return v.norm();
  }
  std::vector<bool> passive(nc, false);
  Vector w = A.transpose() * (v - A * x);
  const double tol = 1e-12 * (1.0 + v.norm()) * (1.0 + A.norm());

  for (int outer = 0; outer < 6 * static_cast<int>(nc) + 20; ++outer) {
    Index t = -1;
    double best = tol;
    for (Index j = 0; j < nc; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;

    for (int inner = 0; inner < 4 * static_cast<int>(nc) + 20; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < nc; ++j)
        if (passive[j]) idx.push_back(j);
      Matrix Ap(A.rows(), static_cast<Index>(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Index>(k)) = A.col(idx[k]);
      Vector z = Ap.colPivHouseholderQr().solve(v);

      bool all_pos = true;
      for (Index k = 0; k < z.size(); ++k)
        if (z(k) <= 0.0) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(static_cast<Index>(k));
        break;
      }
      double alpha = 2.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        double zk = z(static_cast<Index>(k)), xk = x(idx[k]);
        if (zk <= 0.0 && xk - zk > 0.0) alpha = std::min(alpha, xk / (xk - zk));
      }
      if (alpha > 1.0) alpha = 1.0;
      for (size_t k = 0; k < idx.size(); ++k) {
        Index j = idx[k];
        x(j) += alpha * (z(static_cast<Index>(k)) - x(j));
        if (x(j) <= 1e-14) {
          x(j) = 0.0;
          passive[j] = false;
        }
      }
    }
    w = A.transpose() * (v - A * x);
  }
  if (coeffs) *coeffs = x;
  return (v - A * x).norm();
}

}  // namespace horizon

#endif  // HORIZON_LP_HPP
