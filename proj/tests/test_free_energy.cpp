// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "polylab/free_energy.hpp"
#include "polylab/paths.hpp"

using namespace polylab;

namespace {

Environment zero_env(int n, int cells = 256) {
  return build_environment(n, 0.0, 1.0, 1.0 / cells, named_family("zero", n), false);
}

Environment top_linear(int cells = 4096) {
  // f = (t, 0)
  return build_environment(2, 0.0, 1.0, 1.0 / cells, [](int i, double t) { return i == 1 ? t : 0.0; }, false);
}

}  // namespace

TEST_CASE("single free energy: closed forms") {
  CHECK(single_free_energy(zero_env(3), 0.0, 3, 1.0, 1).value == doctest::Approx(-std::log(2.0)).epsilon(1e-9));
  CHECK(single_free_energy(top_linear(), 0.0, 2, 1.0, 1).value == doctest::Approx(std::log(std::exp(1.0) - 1.0)).epsilon(1e-6));
  CHECK(single_free_energy(zero_env(3), 0.0, 3, 0.7, 1, Beta::infinite()).value == 0.0);
  const auto sq = build_environment(2, 0.0, 1.0, 1.0 / 64, [](int i, double t) { return i * t * t; }, false);
  CHECK(single_free_energy(sq, 0.0, 2, 1.0, 2).value == doctest::Approx(2.0));
}

TEST_CASE("brute-force oracle") {
  const auto zero = zero_env(3);
  CHECK(brute_force_single(zero, 0.0, 3, 1.0, 1, Beta{1.0}, 20).value == doctest::Approx(-std::log(2.0)).epsilon(1e-8));
  const auto sq = build_environment(2, 0.0, 1.0, 1.0 / 64, [](int i, double t) { return i * t * t; }, false);
  CHECK(brute_force_single(sq, 0.0, 2, 1.0, 2, Beta{1.0}, 10).value == doctest::Approx(2.0));
  const auto lin = top_linear();
  CHECK(brute_force_single(lin, 0.0, 2, 1.0, 1, Beta{1.0}, 20).value ==
        doctest::Approx(single_free_energy(lin, 0.0, 2, 1.0, 1).value).epsilon(1e-4));
}

TEST_CASE("multi free energy") {
  const auto env = build_environment(3, 0.0, 1.0, 1.0 / 1024, random_smooth_family(3, 9), true);
  EndpointPair one{{{0.0, 3}}, {{1.0, 1}}};
  CHECK(multi_free_energy(env, one).value == doctest::Approx(single_free_energy(env, 0.0, 3, 1.0, 1).value).epsilon(1e-6));

  EndpointPair packed{special_endpoints(EndpointKind::Unk, 0.0, 3, 3), special_endpoints(EndpointKind::Vk, 0.6, 3, 3)};
  double sum = 0.0;
  for (int i = 1; i <= 3; ++i) sum += env(i, 0.6) - env(i, 0.0);
  CHECK(multi_free_energy(env, packed).value == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("multi free energy against rejection sampling") {
  // Two one-jump paths through three curves: the jump times (a, b) satisfy a <= b.
  const auto env = build_environment(3, 0.0, 1.0, 1.0 / 1024, random_smooth_family(3, 4), true);
  EndpointPair pair{special_endpoints(EndpointKind::Unk, 0.0, 2, 3), special_endpoints(EndpointKind::Vk, 1.0, 2, 3)};
  std::mt19937_64 gen(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int draws = 400000;
  double acc = 0.0;
  for (int d = 0; d < draws; ++d) {
    const double a = u(gen), b = u(gen);
    if (a > b) continue;
    const double e = path_energy(env, PathCoords{0.0, 1.0, 2, 1, {a}}) + path_energy(env, PathCoords{0.0, 1.0, 3, 2, {b}});
    acc += std::exp(e);
  }
  const double mc = std::log(acc / draws);
  CHECK(multi_free_energy(env, pair).value == doctest::Approx(mc).epsilon(1e-3));
}

TEST_CASE("down/right free energy") {
  const auto zero = zero_env(3);
  CHECK(down_right_free_energy(zero, 0.0, 1, 1.0, 3).value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  const auto sq = build_environment(2, 0.0, 1.0, 1.0 / 64, [](int i, double t) { return i * t * t; }, false);
  CHECK(down_right_free_energy(sq, 0.0, 2, 1.0, 2).value == doctest::Approx(2.0));
}

TEST_CASE("complement at one path") {
  const auto env = build_environment(3, 0.0, 1.0, 1.0 / 4096, random_smooth_family(3, 2), true);
  const double x = 0.25, y = 0.75;
  EndpointPair top{special_endpoints(EndpointKind::Vpk, x, 1, 3), special_endpoints(EndpointKind::Vk, y, 1, 3)};
  EndpointPair both{special_endpoints(EndpointKind::Vk, x, 2, 3), special_endpoints(EndpointKind::Vk, y, 2, 3)};
  const double lhs = multi_free_energy(env, top).value + down_right_free_energy(env, x, 1, y, 2).value;
  CHECK(lhs == doctest::Approx(multi_free_energy(env, both).value).epsilon(1e-3));
}

TEST_CASE("slice reassembly on the zero environment") {
  const auto zero = zero_env(2);
  for (double z : {0.1, 0.5, 0.9}) CHECK(free_energy_slice(zero, 0.0, 2, 1.0, 1, 1, z) == doctest::Approx(0.0));
}
