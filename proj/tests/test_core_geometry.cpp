#include <random>

#include "doctest.h"
#include "horizon/cone.hpp"
#include "horizon/infinity.hpp"
#include "horizon/polyhedron.hpp"
#include "horizon/sphere_grid.hpp"
#include "test_helpers.hpp"

using namespace horizon;
using namespace horizon::testing;

TEST_CASE("direction normalizes and rejects zero") {
  Direction u(vec({3, 4}));
  CHECK(u.coords().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(Direction(vec({0, 0})), Error);
}

TEST_CASE("lp_feasible basic") {
  // {x <= 1, -x <= -2} contradictory
  std::vector<LinConstraint> cs = {{vec({1}), 1, false}, {vec({-1}), -2, false}};
  CHECK(!lp_feasible(cs, 1));

  std::vector<LinConstraint> ok = {{vec({1}), 1, false}};
  auto x = lp_feasible(ok, 1);
  REQUIRE(x);
  CHECK((*x)(0) <= 1 + 1e-9);

  // wedge with x1 >= 7: point must satisfy all rows
  auto w = wedge2d();
  auto cons = w.constraints();
  cons.push_back({vec({-1, 0}), -7, false});
  auto p = lp_feasible(cons, 2);
  REQUIRE(p);
  for (const auto& c : cons) CHECK(c.a.dot(*p) <= c.rhs + 1e-8);
}

TEST_CASE("lp_feasible deterministic") {
  auto cons = wedge2d().constraints();
  cons.push_back({vec({-1, 0}), -7, false});
  auto a = lp_feasible(cons, 2);
  auto b = lp_feasible(cons, 2);
  REQUIRE(a);
  REQUIRE(b);
  CHECK((*a)(0) == (*b)(0));
  CHECK((*a)(1) == (*b)(1));
}

TEST_CASE("cone membership") {
  GenCone c = GenCone::zero(2);
  c.generators.push_back(vec({1, -2}));
  CHECK(cone_member(c, vec({2, -4})));
  CHECK(!cone_member(c, vec({-1, 2})));

  GenCone z = GenCone::zero(2);
  CHECK(cone_member(z, vec({0, 0})));
  CHECK(!cone_member(z, vec({1e-6, 0}), 1e-9));

  // positive scaling invariance
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(0.1, 100.0);
  for (int i = 0; i < 50; ++i) {
    Vector v = vec({2, -4});
    CHECK(cone_member(c, Vector(scale(rng) * v)));
  }
}

TEST_CASE("recession cone of wedge") {
  GenCone rc = recession_cone(wedge2d());
  CHECK(rc.lineality.empty());
  REQUIRE(rc.generators.size() == 2);
  CHECK(cone_member(rc, vec({2, 1})));
  CHECK(cone_member(rc, vec({1, 2})));
  CHECK(!cone_member(rc, vec({-1, 0})));
  CHECK(!cone_member(rc, vec({1, 0})));
}

TEST_CASE("recession cone of unit box is zero") {
  HPolyhedron box = HPolyhedron::from_inequalities(
      mat({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), vec({1, 0, 1, 0}));
  CHECK(recession_cone(box).is_zero());
}

TEST_CASE("halfplane recession equals itself") {
  HPolyhedron hp = HPolyhedron::from_inequalities(mat({{1, -1}}), vec({0}));  // x2 >= x1
  GenCone rc = recession_cone(hp);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0, 1);
  for (int i = 0; i < 1000; ++i) {
    Vector v = vec({g(rng), g(rng)});
    bool direct = v(0) - v(1) <= 1e-9 * v.norm();
    CHECK(cone_member(rc, v, 1e-7 * (1 + v.norm())) == direct);
  }
}

TEST_CASE("recession cone of a polyhedral cone is itself") {
  auto w = wedge2d();
  GenCone rc = recession_cone(w);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0, 1);
  for (int i = 0; i < 1000; ++i) {
    Vector v = vec({g(rng), g(rng)});
    bool in_p = w.contains(v);
    CHECK(cone_member(rc, v, 1e-7 * (1 + v.norm())) == in_p);
  }
}

TEST_CASE("normal cone at a point") {
  auto w = wedge2d();
  GenCone nc = normal_cone_at(w, vec({2, 1}));
  REQUIRE(nc.generators.size() == 1);
  CHECK(nc.generators[0].dot(vec({1, -2}) / std::sqrt(5.0)) ==
        doctest::Approx(1.0).epsilon(1e-10));

  CHECK(normal_cone_at(w, vec({3, 3})).is_zero());

  HPolyhedron line;  // {x1 = 0}
  line.A.resize(0, 2);
  line.b.resize(0);
  line.E = mat({{1, 0}});
  line.d = vec({0});
  GenCone nl = normal_cone_at(line, vec({0, 5}));
  CHECK(nl.generators.empty());
  REQUIRE(nl.lineality.size() == 1);
  CHECK(std::abs(nl.lineality[0](0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(normal_cone_at(w, vec({-1, 0})), NotMemberError);
}

TEST_CASE("normal cone generators support the polyhedron") {
  // For convex P, <g, y - x> <= tol for all vertices y.
  HPolyhedron tri = HPolyhedron::from_inequalities(
      mat({{-1, 0}, {0, -1}, {1, 1}}), vec({0, 0, 1}));
  std::vector<Vector> vertices = {vec({0, 0}), vec({1, 0}), vec({0, 1})};
  for (const Vector& x : vertices) {
    GenCone nc = normal_cone_at(tri, x);
    for (const Vector& g : nc.generators)
      for (const Vector& y : vertices) CHECK(g.dot(y - x) <= 1e-8);
  }
}

TEST_CASE("polar and intersection") {
  GenCone quad = GenCone::zero(2);  // first quadrant
  quad.generators.push_back(vec({1, 0}));
  quad.generators.push_back(vec({0, 1}));
  GenCone pol = polar(quad);  // third quadrant
  CHECK(cone_member(pol, vec({-1, -1})));
  CHECK(!cone_member(pol, vec({1, 0})));

  GenCone upper = GenCone::zero(2);
  upper.generators.push_back(vec({0, 1}));
  upper.generators.push_back(vec({-1, 0}));
  GenCone inter = cone_intersection(quad, upper);  // ray (0,1)
  CHECK(cone_member(inter, vec({0, 3})));
  CHECK(!cone_member(inter, vec({1, 0})));
  CHECK(!cone_member(inter, vec({-1, 0})));

  // opposite rays meet only at zero
  GenCone ray = GenCone::zero(2);
  ray.generators.push_back(vec({1, -2}));
  GenCone neg = GenCone::zero(2);
  neg.generators.push_back(vec({-1, 2}));
  CHECK(cone_intersection(ray, neg).is_zero());
}

TEST_CASE("sphere grid") {
  auto d4 = sphere_grid(2, 4);
  REQUIRE(d4.size() == 4);
  CHECK((d4[0].coords() - vec({1, 0})).norm() < 1e-12);
  CHECK((d4[1].coords() - vec({0, 1})).norm() < 1e-12);
  CHECK((d4[2].coords() - vec({-1, 0})).norm() < 1e-12);
  CHECK((d4[3].coords() - vec({0, -1})).norm() < 1e-12);

  auto d8 = sphere_grid(2, 8);
  bool found = false;
  for (const auto& u : d8)
    if ((u.coords() - vec({std::sqrt(2.0) / 2, std::sqrt(2.0) / 2})).norm() < 1e-12)
      found = true;
  CHECK(found);

  auto d3 = sphere_grid(3, 100);
  REQUIRE(d3.size() == 100);
  for (const auto& u : d3) CHECK(u.coords().norm() == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 0; i < d3.size(); ++i)
    for (size_t j = i + 1; j < d3.size(); ++j)
      CHECK((d3[i].coords() - d3[j].coords()).norm() > 1e-6);

  // determinism for the seeded branch
  auto a = sphere_grid(4, 16, 5);
  auto b = sphere_grid(4, 16, 5);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK((a[i].coords() - b[i].coords()).norm() == 0.0);
}

TEST_CASE("projection onto polyhedron") {
  HPolyhedron hp = HPolyhedron::from_inequalities(mat({{0, 1}}), vec({0}));  // x2 <= 0
  Vector pr = project_onto(hp, vec({3, 2}));
  CHECK((pr - vec({3, 0})).norm() < 1e-9);
  CHECK(distance_to(hp, vec({3, 2})) == doctest::Approx(2.0));

  auto w = wedge2d();
  Vector q = project_onto(w, vec({1, -1}));
  // oracle: closed-form projection onto the ray pos{(2,1)}
  Vector ray = vec({2, 1}) / std::sqrt(5.0);
  Vector expect = std::max(0.0, ray.dot(vec({1, -1}))) * ray;
  CHECK((q - expect).norm() < 1e-8);
}
