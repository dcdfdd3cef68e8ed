// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "polylab/error.hpp"
#include "polylab/grsk.hpp"
#include "polylab/oy_polymer.hpp"
#include "polylab/rng.hpp"

using namespace polylab;

TEST_CASE("seeded samples are reproducible") {
  const OYSample a(5, 4, 1.0, 4.0, 1.0 / 64);
  const OYSample b(5, 4, 1.0, 4.0, 1.0 / 64);
  CHECK(a.brownian().data() == b.brownian().data());
  const OYSample c(6, 4, 1.0, 4.0, 1.0 / 64);
  CHECK(a.brownian().data() != c.brownian().data());
}

TEST_CASE("Brownian moments at time one") {
  const int N = 10000;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < N; ++r) {
    const auto env = brownian_environment(1, 1.0, 1.0 / 16, replica_seed(99, static_cast<std::uint64_t>(r)));
    const double v = env(1, 1.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / N;
  const double var = (sq - N * mean * mean) / (N - 1);
  CHECK(std::abs(mean) <= 0.03);
  CHECK(var >= 0.94);
  CHECK(var <= 1.06);
}

TEST_CASE("line ensemble and sheet") {
  const int n = 4;
  const double T = 1.0;
  const OYSample s(3, n, T, default_l_max(n, T, 1.0), 1.0 / 512);
  const auto& c = s.constants();
  const double x = 0.5;
  const double expected = s.Y()(1, c.s + x) - c.C1 * x - c.C2 - c.c3(1);
  CHECK(kpz_line_prelimit(s, 1, x) == expected);
  CHECK_THROWS_AS(kpz_line_prelimit(s, n + 1, x), RangeError);

  const double direct = single_free_energy(s.brownian(), 0.0, n, c.s + x, 1).value - c.C1 * x - c.C2;
  CHECK(kpz_line_prelimit(s, 1, x) == doctest::Approx(direct).epsilon(1e-3));
  CHECK(kpz_sheet_prelimit(s, 0.0, x) == doctest::Approx(kpz_line_prelimit(s, 1, x)).epsilon(1e-9));
}

TEST_CASE("Y and B forms of the sheet agree") {
  const int n = 4;
  const double T = 1.0;
  const OYSample s(8, n, T, default_l_max(n, T, 1.0), 1.0 / 8192);
  CHECK(kpz_sheet_prelimit(s, 0.5, 0.25) ==
        doctest::Approx(kpz_sheet_prelimit(s, 0.5, 0.25, SheetForm::b_form)).epsilon(1e-3));
}

TEST_CASE("polymer marginal") {
  const OYSample s(12, 6, 2.0, default_l_max(6, 2.0, 1.0), 1.0 / 1024);
  const auto m = polymer_marginal(s, 2, 1.0, 0.5);
  CHECK(m.normalization_error <= 1e-3);
  for (std::size_t j = 0; j < m.z.size(); ++j) {
    CHECK(std::exp(m.log_upper[j]) + std::exp(m.log_lower[j]) == doctest::Approx(1.0).epsilon(1e-9));
    if (j > 0) {
      CHECK(m.log_upper[j] <= m.log_upper[j - 1] + 1e-12);
      CHECK(m.log_lower[j] >= m.log_lower[j - 1] - 1e-12);
    }
  }
  CHECK(m.h_mu == doctest::Approx(m.h_direct).epsilon(1e-3));
}

TEST_CASE("quantile bounds with equal starts") {
  const OYSample s(4, 8, 2.0, default_l_max(8, 2.0, 1.0), 1.0 / 512);
  QuantileDesign d;
  d.x1 = d.x2 = 1.0;
  const auto q = busemann_quantile_bounds(s, d);
  CHECK(q.min() >= -1e-8);
}

TEST_CASE("F is monotone in z across starting points") {
  const OYSample s(21, 6, 2.0, default_l_max(6, 2.0, 1.0), 1.0 / 512);
  std::vector<double> zs;
  for (int j = 0; j <= 12; ++j) zs.push_back(-2.0 + 0.125 * j);
  const PolymerWindow w(s, 2, {0.5, 1.0}, {1.0}, zs);
  for (std::size_t j = 1; j < zs.size(); ++j) {
    const double before = w.F(1.0, zs[j - 1]) - w.F(0.5, zs[j - 1]);
    const double after = w.F(1.0, zs[j]) - w.F(0.5, zs[j]);
    CHECK(after - before >= -1e-9);
  }
}

TEST_CASE("per-sample down/right identity") {
  const int n = 4, k = 2;
  const double T = 1.0, x = 0.5, z = -0.5;
  const OYSample s(31, n, T, default_l_max(n, T, 1.0), 1.0 / 4096);
  const double lhs = f_field(s, k, x, z) + reversed_down_right(s, k, x, z) - s.constants().C1 * x;
  CHECK(std::abs(lhs) <= 1e-3);
}
