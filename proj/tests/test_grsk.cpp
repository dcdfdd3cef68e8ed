// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "polylab/grsk.hpp"

using namespace polylab;

namespace {

double sum_at(const Environment& e, std::size_t j) {
  double s = 0.0;
  for (int i = 1; i <= e.curves(); ++i) s += e.sample(i, j);
  return s;
}

}  // namespace

TEST_CASE("T on the zero environment gives +/- log t") {
  const auto zero = build_environment(2, 0.0, 1.0, 1.0 / 64, named_family("zero", 2), false);
  const auto t = t_transform(zero, 1);
  // Exact at grid nodes; the curves are linear in between.
  for (double x : {0.125, 0.5, 1.0}) {
    CHECK(t(1, x) == doctest::Approx(std::log(x)).epsilon(1e-9));
    CHECK(t(2, x) == doctest::Approx(-std::log(x)).epsilon(1e-9));
  }
  const auto w = w_transform(zero);
  CHECK(w(1, 0.5) == doctest::Approx(std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("T and W preserve the sum of curves") {
  const auto env = build_environment(4, 0.0, 1.0, 1.0 / 256, random_smooth_family(4, 8), true);
  const auto t = t_transform(env, 2);
  const auto w = w_transform(env);
  for (std::size_t j = 1; j < env.points(); j += 17) {
    CHECK(sum_at(t, j) == doctest::Approx(sum_at(env, j)).epsilon(1e-12));
    CHECK(sum_at(w, j) == doctest::Approx(sum_at(env, j)).epsilon(1e-10));
  }
}

TEST_CASE("T is not an involution") {
  // After one application the gap f_2 - f_1 behaves like -2 log t, so a
  // second application has no finite value at all.
  const auto env = build_environment(2, 0.0, 1.0, 1.0 / 256, random_smooth_family(2, 8), true);
  const auto once = t_transform(env, 1);
  CHECK(once.log_exponent(1) == 1.0);
  CHECK(once.log_exponent(2) == -1.0);
  CHECK_THROWS(t_transform(once, 1));
}

TEST_CASE("W of one curve is the curve") {
  const auto env = build_environment(1, 0.0, 1.0, 1.0 / 64, random_smooth_family(1, 3), true);
  CHECK(w_transform(env).data() == env.data());
}

TEST_CASE("identity residuals") {
  const auto zero = build_environment(2, 0.0, 1.0, 1.0 / 256, named_family("zero", 2), false);
  IdentityParams p;
  p.k = 1;
  p.t = 1.0;
  CHECK(identity_residual(zero, IdentityId::greene, p) <= 1e-12);

  const auto smooth = build_environment(3, 0.0, 1.0, 1.0 / 4096, named_family("sin-poly", 3), true);
  p.k = 3;
  CHECK(identity_residual(smooth, IdentityId::greene, p) <= 1e-9);

  const auto rnd = build_environment(2, 0.0, 1.0, 1.0 / 4096, random_smooth_family(2, 1), true);
  p.k = 1;
  CHECK(identity_residual(rnd, IdentityId::wf_wrf, p) <= 1e-3);
}

TEST_CASE("identity names round-trip") {
  for (IdentityId id : all_identities()) CHECK(identity_from_string(to_string(id)) == id);
}
