// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace polylab {

// Serial paths are kept as reference implementations; both must give
// bit-identical results.
enum class Execution { serial, parallel };

// Worker count: POLYLAB_THREADS if set, otherwise the OpenMP default.
int worker_threads();

// Overrides the worker count for the rest of the process (0 restores default).
void set_worker_threads(int threads);

}  // namespace polylab
