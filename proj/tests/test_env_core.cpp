// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "polylab/environment.hpp"
#include "polylab/error.hpp"
#include "polylab/free_energy.hpp"
#include "polylab/paths.hpp"

using namespace polylab;

TEST_CASE("zero curve samples") {
  const auto env = build_environment(1, 0.0, 1.0, 0.5, named_family("zero", 1), false);
  REQUIRE(env.points() == 3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(env.sample(1, j) == 0.0);
}

TEST_CASE("normalization shifts each curve to zero at the left end") {
  const auto env = build_environment(2, 0.0, 1.0, 0.25, [](int i, double t) { return i == 1 ? t : 1.0 + t; }, true);
  for (std::size_t j = 0; j < env.points(); ++j) {
    CHECK(env.sample(1, j) == doctest::Approx(env.node(j)));
    CHECK(env.sample(2, j) == doctest::Approx(env.node(j)));
  }
  CHECK(env.normalized_at_origin());
}

TEST_CASE("named family is deterministic") {
  const auto a = build_environment(3, 0.0, 1.0, 1.0 / 64, named_family("sin-poly", 3), true);
  const auto b = build_environment(3, 0.0, 1.0, 1.0 / 64, named_family("sin-poly", 3), true);
  std::ostringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("t,f1,f2,f3\n", 0) == 0);
}

TEST_CASE("grid must divide the interval") {
  CHECK_THROWS_AS(grid_points(0.0, 1.0, 0.3), ConfigError);
  CHECK(grid_points(0.0, 1.0, 0.125) == 9);
}

TEST_CASE("interpolation and range") {
  const auto env = build_environment(1, 0.0, 1.0, 0.5, [](int, double t) { return 2.0 * t; }, false);
  CHECK(env(1, 0.3) == doctest::Approx(0.6));
  CHECK_THROWS_AS(env(1, 1.5), RangeError);
  CHECK_THROWS_AS(env(2, 0.5), RangeError);
}

TEST_CASE("path energy") {
  const auto zero = build_environment(3, 0.0, 1.0, 1.0 / 8, named_family("zero", 3), false);
  PathCoords p{0.0, 1.0, 3, 1, {0.25, 0.5}};
  CHECK(path_energy(zero, p) == 0.0);

  const auto sq = build_environment(2, 0.0, 1.0, 1.0 / 8, [](int i, double t) { return i == 2 ? t * t : 0.0; }, false);
  CHECK(path_energy(sq, PathCoords{0.0, 1.0, 2, 2, {}}) == doctest::Approx(1.0));

  const auto lin = build_environment(2, 0.0, 1.0, 1.0 / 8, [](int i, double t) { return i == 1 ? t : 0.0; }, false);
  CHECK(path_energy(lin, PathCoords{0.0, 1.0, 2, 1, {0.5}}) == doctest::Approx(0.5));
}

TEST_CASE("down/right path energy") {
  const auto zero = build_environment(2, 0.0, 1.0, 1.0 / 8, named_family("zero", 2), false);
  CHECK(down_path_energy(zero, DownRightPathCoords{0.0, 1.0, 1, 2, {0.25}}) == 0.0);
  const auto env = build_environment(2, 0.0, 1.0, 1.0 / 8, [](int i, double t) { return i == 2 ? t : 0.0; }, false);
  CHECK(down_path_energy(env, DownRightPathCoords{0.0, 1.0, 1, 2, {0.25}}) == doctest::Approx(0.75));
  CHECK(down_path_energy(env, DownRightPathCoords{0.0, 1.0, 2, 2, {}}) == doctest::Approx(1.0));
}

TEST_CASE("reversal") {
  const auto env = build_environment(1, 0.0, 1.0, 1.0 / 16, [](int, double t) { return t; }, false);
  const auto r = reverse_environment(env, 1.0);
  for (std::size_t j = 0; j < r.points(); ++j) CHECK(r.sample(1, j) == doctest::Approx(r.node(j) - 1.0));

  const auto zero = build_environment(2, 0.0, 1.0, 1.0 / 16, named_family("zero", 2), false);
  const auto rz = reverse_environment(zero, 1.0);
  for (double v : rz.data()) CHECK(v == 0.0);

  const auto smooth = build_environment(3, 0.0, 1.0, 1.0 / 16, random_smooth_family(3, 5), false);
  const auto twice = reverse_environment(reverse_environment(smooth, 1.0), 1.0);
  CHECK(twice.data() == smooth.data());
}

TEST_CASE("affine maps") {
  const auto env = build_environment(2, 0.0, 1.0, 1.0 / 16, random_smooth_family(2, 3), false);
  const auto same = affine_environment(env, AffineMap{1.0, 1.0, 0.0, 0.0, {}});
  CHECK(same.points() == env.points());
  for (std::size_t j = 0; j < env.points(); ++j) CHECK(same.sample(2, j) == doctest::Approx(env.sample(2, j)));

  const auto zero = build_environment(2, 0.0, 1.0, 1.0 / 16, named_family("zero", 2), false);
  const auto g = affine_environment(zero, AffineMap{2.0, 1.0, 0.0, 0.0, {0.5, -1.0}});
  for (std::size_t j = 0; j < g.points(); ++j) {
    CHECK(g.sample(1, j) == doctest::Approx(0.5));
    CHECK(g.sample(2, j) == doctest::Approx(-1.0));
  }

  const auto half = affine_environment(env, AffineMap{1.0, 2.0, 0.0, 0.0, {}});
  CHECK(half.right() - half.left() == doctest::Approx(0.5));
}

TEST_CASE("special endpoints") {
  const auto v = special_endpoints(EndpointKind::Vk, 0.5, 1, 3);
  REQUIRE(v.size() == 1);
  CHECK(v[0].level == 1);
  const auto u = special_endpoints(EndpointKind::Unk, 0.0, 2, 3);
  REQUIRE(u.size() == 2);
  CHECK(u[0].level == 2);
  CHECK(u[1].level == 3);
  const auto vp = special_endpoints(EndpointKind::Vpk, 0.0, 2, 3);
  CHECK(vp[0].level == 2);
  CHECK(vp[1].level == 3);
}

TEST_CASE("non-crossing constraints") {
  EndpointPair one{{{0.0, 3}}, {{1.0, 1}}};
  CHECK(noncrossing_inequalities(one).empty());

  EndpointPair packed{special_endpoints(EndpointKind::Unk, 0.0, 2, 2), special_endpoints(EndpointKind::Vk, 1.0, 2, 2)};
  CHECK(analyze_polytope(packed).dimension() == 0);

  // Two one-jump paths: the jump of path 1 must come before the jump of path 2.
  EndpointPair two{special_endpoints(EndpointKind::Unk, 0.0, 2, 3), special_endpoints(EndpointKind::Vk, 1.0, 2, 3)};
  const auto layout = analyze_polytope(two);
  CHECK(layout.dimension() == 2);
  CHECK(in_polytope(two, {{0.3}, {0.6}}));
  CHECK_FALSE(in_polytope(two, {{0.6}, {0.3}}));
}
