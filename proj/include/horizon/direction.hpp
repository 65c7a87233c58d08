#ifndef HORIZON_DIRECTION_HPP
#define HORIZON_DIRECTION_HPP

#include "horizon/types.hpp"

namespace horizon {

// Unit vector on the sphere; construction normalizes and rejects zero input.
class Direction {
 public:
  explicit Direction(const Vector& v) {
    double nrm = v.norm();
    if (nrm < 1e-13) throw Error("Direction: zero vector");
    coords_ = v / nrm;
  }

  const Vector& coords() const { return coords_; }
  Index dim() const { return coords_.size(); }
  double dot(const Vector& v) const { return coords_.dot(v); }

 private:
  Vector coords_;
};

inline Direction make_direction(std::initializer_list<double> vals) {
  Vector v(static_cast<Index>(vals.size()));
  Index i = 0;
  for (double x : vals) v(i++) = x;
  return Direction(v);
}

}  // namespace horizon

#endif  // HORIZON_DIRECTION_HPP
