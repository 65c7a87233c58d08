#include <random>

#include "doctest.h"
#include "horizon/infinity.hpp"
#include "horizon/sphere_grid.hpp"
#include "test_helpers.hpp"

using namespace horizon;
using namespace horizon::testing;

namespace {

Direction dir(std::initializer_list<double> v) { return make_direction(v); }

HPolyhedron random_polyhedron(std::mt19937_64& rng, Index n, int max_rows) {
  std::normal_distribution<double> g(0, 1);
  std::uniform_int_distribution<int> nrows(1, max_rows);
  for (;;) {
    int m = nrows(rng);
    Matrix A(m, n);
    Vector b(m);
    for (int i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) A(i, j) = g(rng);
      b(i) = g(rng);
    }
    HPolyhedron p = HPolyhedron::from_inequalities(A, b);
    if (!p.is_empty()) return p;
  }
}

}  // namespace

TEST_CASE("wedge directional cones at infinity") {
  auto w = wedge2d();

  ConeUnion nu = dir_normal_cone_at_infinity(w, dir({2, 1}));
  CHECK(nu.has_nonzero());
  CHECK(cone_member(nu, vec({1, -2})));
  CHECK(cone_member(nu, vec({5, -10})));
  CHECK(!cone_member(nu, vec({-1, 2})));
  CHECK(!cone_member(nu, vec({1, 1})));

  ConeUnion nv = dir_normal_cone_at_infinity(w, dir({1, 2}));
  CHECK(cone_member(nv, vec({-2, 1})));
  CHECK(!cone_member(nv, vec({2, -1})));

  // interior recession direction: only the zero cone
  ConeUnion ni = dir_normal_cone_at_infinity(w, dir({1, 1}));
  CHECK(!ni.has_nonzero());
  CHECK(cone_member(ni, vec({0, 0})));

  // u outside the recession cone: the empty union
  ConeUnion ne = dir_normal_cone_at_infinity(w, dir({-1, 0}));
  CHECK(ne.is_empty());
  CHECK(!cone_member(ne, vec({0, 0})));
}

TEST_CASE("full space has trivial cone everywhere") {
  HPolyhedron all = HPolyhedron::full_space(2);
  ConeUnion n = dir_normal_cone_at_infinity(all, dir({0.3, -0.9}));
  CHECK(!n.has_nonzero());
  CHECK(cone_member(n, vec({0, 0})));
}

TEST_CASE("non-directional cone at infinity") {
  auto w = wedge2d();
  ConeUnion n = normal_cone_at_infinity(w);
  CHECK(cone_member(n, vec({1, -2})));
  CHECK(cone_member(n, vec({-2, 1})));
  CHECK(!cone_member(n, vec({1, 1})));
  CHECK(!cone_member(n, vec({-1, -1})));

  HPolyhedron line;
  line.A.resize(0, 2);
  line.b.resize(0);
  line.E = mat({{1, 0}});
  line.d = vec({0});
  ConeUnion nl = normal_cone_at_infinity(line);
  CHECK(cone_member(nl, vec({5, 0})));
  CHECK(cone_member(nl, vec({-5, 0})));
  CHECK(!cone_member(nl, vec({0, 1})));

  HPolyhedron half = HPolyhedron::from_inequalities(mat({{0, 1}}), vec({0}));
  ConeUnion nh = normal_cone_at_infinity(half);
  CHECK(cone_member(nh, vec({0, 3})));
  CHECK(!cone_member(nh, vec({0, -3})));
  CHECK(!cone_member(nh, vec({1, 0})));

  HPolyhedron box = HPolyhedron::from_inequalities(
      mat({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), vec({1, 0, 1, 0}));
  CHECK_THROWS_AS(normal_cone_at_infinity(box), BoundedSetError);
}

TEST_CASE("scaling invariance of directional cone") {
  auto w = wedge2d();
  HPolyhedron scaled = w;
  Vector diag = vec({3.0, 0.25, 7.0});
  for (Index i = 0; i < scaled.A.rows(); ++i) {
    scaled.A.row(i) *= diag(i);
    scaled.b(i) *= diag(i);
  }
  for (auto& u : sphere_grid(2, 16)) {
    ConeUnion a = dir_normal_cone_at_infinity(w, u);
    ConeUnion b = dir_normal_cone_at_infinity(scaled, u);
    CHECK(a.is_empty() == b.is_empty());
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0, 1);
    for (int k = 0; k < 50; ++k) {
      Vector v = vec({g(rng), g(rng)});
      CHECK(cone_member(a, v, 1e-7) == cone_member(b, v, 1e-7));
    }
  }
}

TEST_CASE("generators are limits of point normal cones along the ray") {
  auto w = wedge2d();
  Direction u = dir({2, 1});
  ConeUnion n = dir_normal_cone_at_infinity(w, u);
  for (const GenCone& piece : n.pieces) {
    if (piece.is_zero()) continue;
    // engine-constructed witness: x0 on the boundary ray, then x0 + k u
    Vector x0 = vec({2, 1});
    for (double k : {1e2, 1e3, 1e4}) {
      Vector x = x0 + k * u.coords();
      GenCone at = normal_cone_at(w, x);
      for (const Vector& g : piece.generators) CHECK(cone_member(at, g, 1e-6));
    }
  }
}

TEST_CASE("nontriviality wedge and trivial cases") {
  auto w = wedge2d();
  auto r1 = nontriviality_check(w, dir({2, 1}));
  CHECK(r1.lhs);
  CHECK(r1.rhs);
  CHECK(r1.consistent);

  auto r2 = nontriviality_check(HPolyhedron::full_space(2), dir({1, 0}));
  CHECK(!r2.lhs);
  CHECK(!r2.rhs);
  CHECK(r2.consistent);

  HPolyhedron half = HPolyhedron::from_inequalities(mat({{0, 1}}), vec({0}));
  auto r3 = nontriviality_check(half, dir({1, 0}));
  CHECK(r3.lhs);
  CHECK(r3.rhs);
  CHECK(r3.consistent);

  // affine subspace: bd P = P
  HPolyhedron line;
  line.A.resize(0, 2);
  line.b.resize(0);
  line.E = mat({{1, 0}});
  line.d = vec({0});
  auto r4 = nontriviality_check(line, dir({0, 1}));
  CHECK(r4.lhs);
  CHECK(r4.rhs);
  CHECK(r4.consistent);
}

TEST_CASE("nontriviality consistent on random instances") {
  std::mt19937_64 rng(2024);
  int tested = 0;
  while (tested < 100) {
    HPolyhedron p = random_polyhedron(rng, 2, 4);
    GenCone rc = recession_cone(p);
    if (rc.is_zero()) continue;
    Vector g = !rc.generators.empty() ? rc.generators[0] : rc.lineality[0];
    auto rep = nontriviality_check(p, Direction(g));
    CHECK(rep.consistent);
    ++tested;
  }
}

TEST_CASE("intersection rule") {
  // P1 = {x2 <= x1}, P2 = {x2 >= -x1}
  HPolyhedron p1 = HPolyhedron::from_inequalities(mat({{-1, 1}}), vec({0}));
  HPolyhedron p2 = HPolyhedron::from_inequalities(mat({{-1, -1}}), vec({0}));
  auto r1 = intersection_rule_check(p1, p2, dir({1, 0}));
  CHECK(r1.qualification);
  CHECK(r1.inclusion);

  auto w = wedge2d();
  auto r2 = intersection_rule_check(w, w, dir({2, 1}));
  CHECK(r2.qualification);
  CHECK(r2.inclusion);

  // opposing halfplanes: qualification fails
  HPolyhedron lo = HPolyhedron::from_inequalities(mat({{0, 1}}), vec({0}));
  HPolyhedron hi = HPolyhedron::from_inequalities(mat({{0, -1}}), vec({0}));
  auto r3 = intersection_rule_check(lo, hi, dir({1, 0}));
  CHECK(!r3.qualification);
  CHECK(r3.inclusion);  // still true here, evaluated informationally
}

TEST_CASE("directional neighborhood membership") {
  DirNeighborhood v{dir({1, 0}), 10.0, 0.1};
  CHECK(in_dir_neighborhood(v, vec({100, 1})));
  CHECK(!in_dir_neighborhood(v, vec({5, 0})));
  CHECK(!in_dir_neighborhood(v, vec({0, 100})));
}

TEST_CASE("union relation on random polyhedra") {
  // Membership in N(infinity) equals membership in the union over a fine
  // direction grid of the directional cones.
  std::mt19937_64 rng(515);
  std::normal_distribution<double> g(0, 1);
  int done = 0;
  while (done < 10) {
    HPolyhedron p = random_polyhedron(rng, 2, 4);
    GenCone rc = recession_cone(p);
    if (rc.is_zero()) continue;
    ++done;

    ConeUnion full = normal_cone_at_infinity(p);
    std::vector<ConeUnion> per_dir;
    for (auto& u : sphere_grid(2, 64)) {
      if (!in_recession_cone(p, u, 1e-7)) continue;
      per_dir.push_back(dir_normal_cone_at_infinity(p, u));
    }
    int agree = 0, total = 0;
    for (int k = 0; k < 100; ++k) {
      Vector v = vec({g(rng), g(rng)});
      bool in_full = cone_member(full, v, 1e-3);
      bool in_union = false;
      for (const auto& cu : per_dir)
        if (cone_member(cu, v, 1e-3)) in_union = true;
      ++total;
      if (in_full == in_union) ++agree;
    }
    CHECK(agree >= static_cast<int>(0.99 * total));
  }
}
