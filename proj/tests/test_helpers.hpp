#ifndef HORIZON_TEST_HELPERS_HPP
#define HORIZON_TEST_HELPERS_HPP

#include <initializer_list>

#include "horizon/polyhedron.hpp"

namespace horizon::testing {

inline Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Index r = static_cast<Index>(rows.size());
  Index c = r > 0 ? static_cast<Index>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// The running wedge {x1/2 <= x2 <= 2 x1}: x1 - 2 x2 <= 0, x2 - 2 x1 <= 0,
// -x1 <= 0.
inline HPolyhedron wedge2d() {
  return HPolyhedron::from_inequalities(mat({{1, -2}, {-2, 1}, {-1, 0}}),
                                        vec({0, 0, 0}));
}

}  // namespace horizon::testing

#endif
