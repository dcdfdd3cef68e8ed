// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/parallel.hpp"
#include "polylab/paths.hpp"
#include "polylab/quadrature.hpp"

namespace polylab {

/// Inverse temperature; infinite() selects the (max, +) last-passage value.
class Beta {
 public:
  constexpr Beta(double value = 1.0) : value_(value) {}
  static constexpr Beta infinite() { return Beta(std::numeric_limits<double>::infinity()); }
  constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  constexpr double value() const { return value_; }

 private:
  double value_;
};

/// Log of a non-negative quantity; -infinity stands for zero.
struct LogValue {
  double value = kNegInf;
  constexpr operator double() const { return value; }
  constexpr bool is_zero() const { return value == kNegInf; }
};

// beta^{-1} log of the integral of exp(beta f(pi)) over up/right paths (x,l) -> (y,m).
LogValue single_free_energy(const Environment& env, double x, int l, double y, int m,
                            Beta beta = Beta{});

// Independent oracle: nested Gauss-Legendre (finite beta) or coarse-to-fine
// grid search (infinite beta) over the ordered simplex, l - m <= 4.
LogValue brute_force_single(const Environment& env, double x, int l, double y, int m, Beta beta,
                            int points_per_dim);

// -log of the integral of exp(-f(rho)) over down/right paths (x,m) -> (y,l).
LogValue down_right_free_energy(const Environment& env, double x, int m, double y, int l);

// f[(x,l) -> (z,k+1)] + f[(z,k) -> (y,m)].
double free_energy_slice(const Environment& env, double x, int l, double y, int m, int k, double z);

/// Free coordinates of Q[U -> V] after substituting coordinates pinned to a
/// constant, with their interval bounds and the order relations between them.
struct PolytopeLayout {
  bool empty = false;
  std::vector<TimeSlot> free;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::pair<int, int>> edges;  // free[a] <= free[b]
  std::vector<std::pair<TimeSlot, double>> pinned;

  int dimension() const { return static_cast<int>(free.size()); }
};

PolytopeLayout analyze_polytope(const EndpointPair& pair);

// All orderings of the free coordinates compatible with the layout's edges.
std::vector<std::vector<int>> linear_extensions(const PolytopeLayout& layout);

struct MultiOptions {
  int d_max = 6;
  Execution execution = Execution::parallel;
};

// log of the integral of exp(sum_i f(pi_i)) over non-crossing families, with
// the Hausdorff measure of the polytope's dimension.
LogValue multi_free_energy(const Environment& env, const EndpointPair& pair,
                           const MultiOptions& options = {});

/// f[(x,l) -> (t,j)] for every mesh node t >= x and every level
/// lowest <= j <= l, from one sweep. x must be a mesh node.
class ForwardProfile {
 public:
  ForwardProfile(const Environment& env, const Mesh& mesh, double x, int l, int lowest = 1,
                 Beta beta = Beta{});

  double at(int level, std::size_t node) const;
  const Mesh& mesh() const { return *mesh_; }
  std::size_t start() const { return start_; }

 private:
  const Mesh* mesh_;
  int l_, lowest_;
  double beta_;
  std::size_t start_;
  std::size_t size_;
  std::vector<double> log_i_;   // (l - lowest + 1) x size
  std::vector<double> values_;  // same layout, f_j on the mesh
  double base_;
};

/// f[(t,j) -> (y,m)] for every mesh node t <= y and every level
/// m <= j <= highest, from one backward sweep. y must be a mesh node.
class BackwardProfile {
 public:
  BackwardProfile(const Environment& env, const Mesh& mesh, double y, int m, int highest,
                  Beta beta = Beta{});

  double at(int level, std::size_t node) const;
  const Mesh& mesh() const { return *mesh_; }
  std::size_t end() const { return end_; }

 private:
  const Mesh* mesh_;
  int m_, highest_;
  double beta_;
  std::size_t end_;
  std::size_t size_;
  std::vector<double> log_j_;
  std::vector<double> values_;
  double base_;
};

}  // namespace polylab
