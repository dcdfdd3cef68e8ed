// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "polylab/environment.hpp"

namespace polylab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// Log of the sum of exp(v) in index order.
double log_sum(std::span<const double> v);

/// Sorted quadrature nodes: every grid point strictly inside (lo, hi), the two
/// ends, and any extra points inside [lo, hi]. Extras within 1e-9 cells of a
/// grid point are merged into it.
struct Mesh {
  std::vector<double> t;
  std::vector<std::ptrdiff_t> grid;  // grid index of node, or -1
  std::vector<double> log_half_dt;   // log((t[i+1] - t[i]) / 2) per cell
  double tolerance = 0.0;

  std::size_t size() const { return t.size(); }
  // Index of the node equal to t (same merge rule); throws RangeError.
  std::size_t index_of(double time) const;
};

Mesh make_mesh(const Environment& env, double lo, double hi, std::span<const double> extra = {});

// Nodes (t - a3) / a2 with grid indices kept: the mesh of affine_environment
// that corresponds node for node to `mesh`.
Mesh affine_image(const Mesh& mesh, double a2, double a3);

// f_level at every mesh node; grid nodes read samples exactly.
std::vector<double> values_on(const Environment& env, int level, const Mesh& mesh);

/// One variable of an ordered chain integral. With prev = log I_{r-1}, writes
/// out = log I_r where I_r(t) = int_{s <= t, s in [t_lo, t_hi]} w(s) I_{r-1}(s) ds,
/// trapezoid on each mesh cell.
void chain_step_log(std::span<const double> log_half_dt, std::span<const double> log_w, std::size_t lo,
                    std::size_t hi, std::span<const double> prev, std::span<double> out);

// Same recursion in the (max, +) semiring, over nodes.
void chain_step_max(std::span<const double> log_w, std::size_t lo, std::size_t hi,
                    std::span<const double> prev, std::span<double> out);

}  // namespace polylab
