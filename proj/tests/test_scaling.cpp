// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "polylab/scaling.hpp"

using namespace polylab;

TEST_CASE("scale factors at T = 1") {
  const auto q = ScaledQuery::make(1.0);
  CHECK(q.height == doctest::Approx(std::cbrt(2.0)));
  CHECK(q.space == doctest::Approx(std::cbrt(2.0)));
  CHECK(q.shift == doctest::Approx(std::cbrt(2.0) / 24.0));
}

TEST_CASE("rescaled sheet and line") {
  const int n = 4;
  const double T = 2.0;
  const OYSample s(17, n, T, default_l_max(n, T, 4.0), 1.0 / 256);
  const auto q = ScaledQuery::make(T);
  CHECK(rescale_sheet(s, q, 0.0, 0.5) == rescale_line(s, q, 1, 0.5));
  const double h = kpz_sheet_prelimit(s, q.space * 0.25, q.space * 0.5);
  CHECK(unscale_height(q, rescale_sheet(s, q, 0.25, 0.5)) == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("r and R fields") {
  const int n = 6, k = 2;
  const double T = 2.0;
  const OYSample s(5, n, T, default_l_max(n, T, 4.0), 1.0 / 256);
  const auto q = ScaledQuery::make(T);
  const double x = 0.5, z = -0.5;
  const double r = q.height * f_field(s, k, q.space * x, q.space * z) - std::pow(2.0, 1.5) * std::sqrt(k * x) - 2.0 * z * x;
  CHECK(frak_r(s, q, k, x, z) == doctest::Approx(r).epsilon(1e-12));
  const double R = f_field(s, k, 1.0, -1.0) - k * std::log(1.0) + 1.0 / T + std::lgamma(k + 1.0);
  CHECK(remainder_r(s, k, 1.0, -1.0) == doctest::Approx(R).epsilon(1e-12));

  const double zb = airy_quantile_zbar(k, x);
  CHECK(-2.0 * zb * x == doctest::Approx(std::sqrt(2.0 * k * x)));
}

TEST_CASE("log-factorial through log-gamma") {
  double direct = 0.0;
  for (int k = 1; k <= 20; ++k) {
    direct += std::log(static_cast<double>(k));
    CHECK(std::lgamma(k + 1.0) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("concave gap") {
  const auto g = kconcave_gap(3, 2.0, 1.5, 1.5, 0.25);
  CHECK(g.gap == 0.0);
  CHECK(g.floor == 0.0);
  const auto a = kconcave_gap(2, 2.0, 0.5, 2.0, 0.25);
  const auto b = kconcave_gap(2, 16.0, 0.5, 2.0, 0.25);
  CHECK(a.gap > 0.0);
  CHECK(a.gap >= a.floor);
  CHECK(a.gap == b.gap);
  CHECK(quadratic_constant(0.25) == doctest::Approx(2.0 * 256.0));
}

TEST_CASE("Busemann sandwich with equal ends") {
  const int n = 16;
  const double T = 2.0, h = 1.0 / 128;
  const OYSample s(2, n, T, default_l_max(n, T, 1.0), h);
  const int k_max = admissible_k_max(n, T, 1.0, h);
  REQUIRE(k_max >= 1);
  for (const auto& row : busemann_ray_experiment(s, 1.0, 0.25, 0.25, k_max)) {
    CHECK(row.delta == 0.0);
    CHECK(row.target == 0.0);
  }
  for (const auto& row : busemann_ray_experiment(s, 1.0, 0.0, 0.5, k_max)) {
    CHECK(row.lower <= row.delta + 1e-8);
    CHECK(row.delta <= row.upper + 1e-8);
  }
}

TEST_CASE("Wilson interval") {
  const auto w = wilson_interval(0, 100);
  CHECK(w.lo == 0.0);
  CHECK(w.hi > 0.0);
  const auto m = wilson_interval(50, 100);
  CHECK(m.lo < 0.5);
  CHECK(m.hi > 0.5);
}
