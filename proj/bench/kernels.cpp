// SPDX-License-Identifier: Apache-2.0
// Serial reference against the OpenMP kernels: wall time and agreement.
#include <chrono>
#include <cstdio>
#include <functional>

#include "polylab/free_energy.hpp"
#include "polylab/parallel.hpp"
#include "polylab/paths.hpp"
#include "polylab/stats.hpp"
#include "polylab/suites.hpp"

using namespace polylab;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2f  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("worker threads: %d\n", worker_threads());
  bool ok = true;

  {
    ReplicaSpec spec;
    spec.quantity = "sheet";
    spec.args = {1.0, 0.5};
    spec.replicas = 64;
    spec.n = 8;
    spec.T = 2.0;
    spec.h = grid_step(256);
    SampleTable a, b;
    const double ts = seconds([&] { a = run_replicas(spec, Execution::serial); });
    const double tp = seconds([&] { b = run_replicas(spec, Execution::parallel); });
    report("replicas (sheet)", ts, tp, a.value == b.value);
    ok = ok && a.value == b.value;
  }

  {
    DistParams p;
    p.replicas = 200;
    p.h = grid_step(256);
    DistReport a, b;
    const double ts = seconds([&] { a = distributional_check(DistCheck::sheet_shift, p, Execution::serial); });
    const double tp = seconds([&] { b = distributional_check(DistCheck::sheet_shift, p, Execution::parallel); });
    const bool same = a.statistic == b.statistic && a.mean_a == b.mean_a;
    report("distributional check", ts, tp, same);
    ok = ok && same;
  }

  {
    // Two paths through five curves: a six-dimensional order polytope.
    const int n = 5, k = 2;
    const Environment env = smooth_environment("sin-poly", n, 8192);
    EndpointPair pair{special_endpoints(EndpointKind::Unk, env.left(), k, n),
                      special_endpoints(EndpointKind::Vk, env.right(), k, n)};
    MultiOptions serial{.d_max = 6, .execution = Execution::serial};
    MultiOptions parallel{.d_max = 6, .execution = Execution::parallel};
    double a = 0.0, b = 0.0;
    const double ts = seconds([&] { a = multi_free_energy(env, pair, serial); });
    const double tp = seconds([&] { b = multi_free_energy(env, pair, parallel); });
    report("multi free energy", ts, tp, a == b);
    ok = ok && a == b;
  }
  return ok ? 0 : 1;
}
