#include "doctest.h"
#include "horizon/estimator.hpp"
#include "horizon/infinity.hpp"
#include "horizon/oracle.hpp"
#include "test_helpers.hpp"

using namespace horizon;
using namespace horizon::testing;

namespace {

FuncPtr exp_plus_square() {
  // e^{-x1} + (x2 - x1)^2
  return sum({exp_affine(vec({-1.0, 0.0})), quad(mat({{1.0, -1.0}, {-1.0, 1.0}}))});
}

bool union_has_ray(const ConeUnion& cu, const Vector& dir, double tol = 1e-3) {
  return cone_member(cu, dir.normalized(), tol);
}

}  // namespace

TEST_CASE("subgradients escape along the vertical direction: no bounded part") {
  FuncPtr f = exp_plus_square();
  SubdiffApprox a = estimate_dir_subdiff(*f, make_direction({0.0, 1.0}));
  CHECK(a.empty_bounded);
  CHECK(a.stability >= 0.9);
  // The escape direction is the normalized limit of (-2t, 2t).
  CHECK(union_has_ray(a.singular_rays, vec({-1.0, 1.0})));
  CHECK(!union_has_ray(a.singular_rays, vec({1.0, 1.0})));
}

TEST_CASE("diagonal direction: bounded limits fill the antidiagonal line") {
  FuncPtr f = exp_plus_square();
  Direction u = make_direction({1.0, 1.0});
  SubdiffApprox a = estimate_dir_subdiff(*f, u);
  CHECK(!a.empty_bounded);
  CHECK(a.stability >= 0.9);
  for (const Cluster& c : a.bounded_clusters)
    CHECK(std::abs(c.centroid(0) + c.centroid(1)) < 1e-3);

  // Independent curve-family oracle: x = t u + (s/2, 0) has gradient -> (s, -s).
  std::vector<Vector> offsets;
  for (int s = -3; s <= 3; ++s) offsets.push_back(vec({s / 2.0, 0.0}));
  BruteLimits bl = brute_limit_points(*f, u, offsets);
  for (int s = -3; s <= 3; ++s) {
    bool found = false;
    for (const Vector& v : bl.bounded)
      if ((v - vec({double(s), double(-s)})).norm() < 1e-4) found = true;
    CHECK(found);
  }
}

TEST_CASE("indicator estimate agrees with the exact directional normal cone") {
  HPolyhedron W = wedge2d();
  FuncPtr f = indicator(W);
  for (const Vector& uraw : {vec({2.0, 1.0}), vec({1.0, 2.0}), vec({1.0, 1.0})}) {
    Direction u = Direction(uraw);
    SubdiffApprox a = estimate_dir_subdiff(*f, u);
    ConeUnion exact = dir_normal_cone_at_infinity(W, u);
    // Sampled rays lie in the exact union; exact generators are recovered.
    for (const GenCone& piece : a.singular_rays.pieces) {
      for (const Vector& g : piece.generators) CHECK(cone_member(exact, g, 1e-6));
      for (const Vector& l : piece.lineality) {
        CHECK(cone_member(exact, l, 1e-6));
        CHECK(cone_member(exact, Vector(-l), 1e-6));
      }
    }
    for (const GenCone& piece : exact.pieces)
      for (const Vector& g : piece.generators)
        CHECK(cone_member(a.singular_rays, g, 1e-6));
    CHECK(a.stability >= 0.9);
  }
}

TEST_CASE("lipschitz screen: distance functions hold, coercive quadratic fails") {
  for (const HPolyhedron& P :
       {wedge2d(), HPolyhedron::from_inequalities(mat({{0.0, 1.0}}), vec({0.0}))}) {
    for (const Vector& uraw : {vec({1.0, 1.0}), vec({-1.0, 0.0}), vec({0.0, -1.0})}) {
      LipschitzReport rep = lipschitz_at_infinity_test(*dist(P), Direction(uraw));
      CHECK(rep.verdict == Verdict::Holds);
    }
  }
  LipschitzReport aff =
      lipschitz_at_infinity_test(*affine(vec({3.0, -1.0}), 2.0), make_direction({1.0, 0.0}));
  CHECK(aff.verdict == Verdict::Holds);

  LipschitzReport sq = lipschitz_at_infinity_test(*quad(mat({{1.0, 0.0}, {0.0, 0.0}})),
                                                  make_direction({1.0, 0.0}));
  CHECK(sq.verdict == Verdict::Fails);
}

TEST_CASE("distance subdifferential at infinity") {
  HPolyhedron box = HPolyhedron::from_inequalities(
      mat({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}), vec({1.0, 1.0, 1.0, 1.0}));
  DistanceSubdiffReport b = distance_subdiff_at_infinity(box, make_direction({1.0, 0.0}));
  CHECK(b.bounded_set);

  HPolyhedron half = HPolyhedron::from_inequalities(mat({{0.0, 1.0}}), vec({0.0}));
  DistanceSubdiffReport r = distance_subdiff_at_infinity(half, make_direction({1.0, 0.0}));
  CHECK(!r.bounded_set);
  CHECK(cone_member(r.normal_part, vec({0.0, 1.0})));
  CHECK(!cone_member(r.normal_part, vec({1.0, 0.0})));
  bool found = false;
  for (const Vector& e : r.exterior_normals)
    if ((e - vec({0.0, 1.0})).norm() < 1e-2) found = true;
  CHECK(found);
}

TEST_CASE("estimator is deterministic for a fixed seed") {
  FuncPtr f = exp_plus_square();
  SubdiffApprox a = estimate_dir_subdiff(*f, make_direction({1.0, 1.0}));
  SubdiffApprox b = estimate_dir_subdiff(*f, make_direction({1.0, 1.0}));
  REQUIRE(a.bounded_clusters.size() == b.bounded_clusters.size());
  for (std::size_t i = 0; i < a.bounded_clusters.size(); ++i)
    CHECK((a.bounded_clusters[i].centroid - b.bounded_clusters[i].centroid).norm() == 0.0);
  CHECK(a.stability == b.stability);
}

TEST_CASE("curved families reveal an escape direction straight rays miss") {
  // f = x1^2 + e^{x2} along (1, 0): straight rays see only the horizontal
  // escape (2t, e^c); offsets growing like t^{3/4} push e^{x2} past every
  // polynomial and a vertical escape direction appears as well.
  FuncPtr f = sum({quad(mat({{1.0, 0.0}, {0.0, 0.0}})), exp_affine(vec({0.0, 1.0}))});
  SubdiffApprox a = estimate_dir_subdiff(*f, make_direction({1.0, 0.0}));
  CHECK(union_has_ray(a.singular_rays, vec({1.0, 0.0})));
  CHECK(union_has_ray(a.singular_rays, vec({0.0, 1.0})));

  BruteLimits bl = brute_limit_points(*f, make_direction({1.0, 0.0}),
                                      {vec({0.0, 0.3}), vec({0.0, -0.3})});
  bool vertical = false;
  for (const Vector& d : bl.singular_dirs)
    if ((d - vec({0.0, 1.0})).norm() < 1e-3) vertical = true;
  CHECK(vertical);
}

TEST_CASE("region infimum search") {
  // e^{-x1} + (x2-x1)^2 restricted to the vertical axis: minimum 1 at origin.
  FuncPtr f = exp_plus_square();
  HPolyhedron axis = HPolyhedron::from_equalities(mat({{1.0, 0.0}}), vec({0.0}));
  InfSearchResult r = region_inf_search(*f, axis);
  CHECK(std::abs(r.value - 1.0) < 1e-6);
  CHECK(r.argmin.norm() < 1e-4);

  // Coercive quadratic with a linear tilt over the full space.
  FuncPtr g = sum({quad(mat({{1.0, 0.0}, {0.0, 1.0}})), affine(vec({-2.0, 0.0}))});
  InfSearchResult rg = region_inf_search(*g, HPolyhedron::full_space(2));
  CHECK(std::abs(rg.value - (-1.0)) < 1e-8);
  CHECK((rg.argmin - vec({1.0, 0.0})).norm() < 1e-4);

  // Unattained infimum drifts to the box edge.
  InfSearchResult re = region_inf_search(*exp_affine(vec({-1.0})),
                                         HPolyhedron::full_space(1));
  CHECK(re.value < 1e-3);
  CHECK(re.improved_at_edge);
}

TEST_CASE("ray infimum search") {
  // f(x0 + t u) with f = x^2 - 4x from x0 = 0 along u = 1: min -4 at t = 2.
  FuncPtr f = sum({quad(mat({{1.0}})), affine(vec({-4.0}))});
  RaySearchResult r = ray_inf_search(*f, vec({0.0}), vec({1.0}));
  CHECK(std::abs(r.value + 4.0) < 1e-8);
  CHECK(std::abs(r.t - 2.0) < 1e-4);

  RaySearchResult rd = ray_inf_search(*exp_affine(vec({-1.0})), vec({0.0}), vec({1.0}));
  CHECK(rd.at_far_end);
}

TEST_CASE("empirical error bound modulus") {
  // One-sided residual: x for x >= 0, e^x - 1 below; reference set x <= 0.
  FuncPtr g = pw(vec({1.0}), 0.0, sum({exp_affine(vec({1.0})), affine(vec({0.0}), -1.0)}),
                 affine(vec({1.0})));
  HPolyhedron neg = HPolyhedron::from_inequalities(mat({{1.0}}), vec({0.0}));
  ErrorBoundEstimate eb = empirical_error_bound(*g, neg, 10.0, 100.0);
  CHECK(eb.alpha_hat == doctest::Approx(1.0).epsilon(1e-3));

  // Affine residual <a,x> - b over the complementary halfspace: exact modulus
  // 1/||a||.
  Vector aa = vec({3.0, 4.0});
  FuncPtr lin = affine(aa, -5.0);
  HPolyhedron hs = HPolyhedron::from_inequalities(mat({{3.0, 4.0}}), vec({5.0}));
  ErrorBoundEstimate e2 = empirical_error_bound(*lin, hs, 10.0, 100.0);
  CHECK(e2.alpha_hat == doctest::Approx(1.0 / 5.0).epsilon(1e-3));

  // Residual never positive: no usable samples.
  CHECK_THROWS_AS(empirical_error_bound(*affine(vec({0.0, 0.0}), -1.0), hs, 10.0, 100.0),
                  NoViolatingSamplesError);
}
