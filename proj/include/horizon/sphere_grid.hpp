#ifndef HORIZON_SPHERE_GRID_HPP
#define HORIZON_SPHERE_GRID_HPP

#include <cmath>
#include <random>
#include <vector>

#include "horizon/direction.hpp"
#include "horizon/types.hpp"

namespace horizon {

// Deterministic direction sweep: uniform angles in the plane, a Fibonacci
// spiral on the 2-sphere, seeded uniform unit vectors above that.
inline std::vector<Direction> sphere_grid(Index n, int resolution, unsigned seed = 42) {
  if (resolution < 4) throw Error("sphere_grid: resolution must be >= 4");
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<size_t>(resolution));

  if (n == 1) {
    dirs.push_back(make_direction({1.0}));
    dirs.push_back(make_direction({-1.0}));
    return dirs;
  }
  if (n == 2) {
    for (int k = 0; k < resolution; ++k) {
      double th = 2.0 * M_PI * k / resolution;
      Vector v(2);
      v << std::cos(th), std::sin(th);
      dirs.emplace_back(v);
    }
    return dirs;
  }
  if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < resolution; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / resolution;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = golden * k;
      Vector v(3);
      v << r * std::cos(th), r * std::sin(th), z;
      dirs.emplace_back(v);
    }
    return dirs;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < resolution) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
    if (v.norm() > 1e-8) dirs.emplace_back(v);
  }
  return dirs;
}

}  // namespace horizon

#endif  // HORIZON_SPHERE_GRID_HPP
