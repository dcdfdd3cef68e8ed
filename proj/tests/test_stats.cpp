// SPDX-License-Identifier: Apache-2.0
#include <random>

#include "doctest.h"
#include "polylab/error.hpp"
#include "polylab/parallel.hpp"
#include "polylab/rng.hpp"
#include "polylab/stats.hpp"

using namespace polylab;

namespace {

ReplicaSpec line_spec(std::size_t replicas) {
  ReplicaSpec spec;
  spec.quantity = "line";
  spec.args = {1, 0.5};
  spec.replicas = replicas;
  spec.master_seed = 42;
  spec.n = 4;
  spec.T = 1.0;
  spec.h = 1.0 / 128;
  return spec;
}

}  // namespace

TEST_CASE("one replica matches a direct call") {
  const auto spec = line_spec(1);
  const auto t = run_replicas(spec);
  const OYSample s(replica_seed(42, 0), spec.n, spec.T, default_l_max(spec.n, spec.T, 1.0), spec.h);
  CHECK(t.value[0] == kpz_line_prelimit(s, 1, 0.5));
}

TEST_CASE("replica tables do not depend on execution") {
  const auto spec = line_spec(12);
  const auto serial = run_replicas(spec, Execution::serial);
  set_worker_threads(3);
  const auto parallel = run_replicas(spec, Execution::parallel);
  set_worker_threads(0);
  CHECK(serial.value == parallel.value);

  const auto doubled = run_replicas(line_spec(24), Execution::serial);
  for (std::size_t r = 0; r < 12; ++r) CHECK(doubled.value[r] == serial.value[r]);
}

TEST_CASE("failing replica names its index") {
  CHECK_THROWS_WITH_AS(map_replicas(5, 1, [](std::uint64_t r, std::uint64_t) -> std::vector<double> {
                         if (r >= 3) throw RangeError("boom");
                         return {0.0};
                       }),
                       doctest::Contains("replica 3"), DataError);
}

TEST_CASE("unknown quantity and wrong arity") {
  auto spec = line_spec(1);
  spec.quantity = "nope";
  CHECK_THROWS_AS(run_replicas(spec), ConfigError);
  spec.quantity = "sheet";
  spec.args = {1.0};
  CHECK_THROWS_AS(run_replicas(spec), DataError);
}

TEST_CASE("KS statistic extremes") {
  const std::vector<double> a{0.1, 0.4, 0.2, 0.9};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == 1.0);
  const std::vector<double> b{1.5, 2.0, 3.0};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), UsageError);
}

TEST_CASE("KS null rejection rate") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int repeats = 1000;
  int rejected = 0;
  for (int rep = 0; rep < repeats; ++rep) {
    std::vector<double> a(1000), b(1000);
    for (auto& v : a) v = u(gen);
    for (auto& v : b) v = u(gen);
    if (ks_two_sample(a, b).p_value < 0.05) ++rejected;
  }
  CHECK(rejected >= repeats / 100);
  CHECK(rejected <= repeats * 12 / 100);
}

TEST_CASE("sheet shift at x = 0 is exact") {
  DistParams p;
  p.x = 0.0;
  p.replicas = 20;
  p.n = 4;
  p.h = 1.0 / 128;
  const auto r = distributional_check(DistCheck::sheet_shift, p);
  CHECK(r.statistic == 0.0);
}

TEST_CASE("check names round-trip") {
  for (DistCheck c : {DistCheck::sheet_shift, DistCheck::f_downright, DistCheck::wrz_law})
    CHECK(dist_check_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(dist_check_from_string("other"), ConfigError);
}
