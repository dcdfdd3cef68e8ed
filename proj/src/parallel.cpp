// SPDX-License-Identifier: Apache-2.0
#include "polylab/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace polylab {

namespace {
std::atomic<int> override_threads{0};

int env_threads() {
  const char* raw = std::getenv("POLYLAB_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int v = std::stoi(raw);
    return v > 0 ? v : 0;
  } catch (const std::exception&) {
    return 0;
  }
}
}  // namespace

int worker_threads() {
  if (const int o = override_threads.load(); o > 0) return o;
  const int def = omp_get_max_threads();
  const int cap = env_threads();
  return cap > 0 && cap < def ? cap : def;
}

void set_worker_threads(int threads) { override_threads.store(threads > 0 ? threads : 0); }

}  // namespace polylab
