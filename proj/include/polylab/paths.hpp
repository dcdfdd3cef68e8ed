// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "polylab/environment.hpp"

namespace polylab {

/// Up/right path from (x, l) to (y, m): times = (t_l, ..., t_{m+1}),
/// non-decreasing, with t_{l+1} = x and t_m = y.
struct PathCoords {
  double x = 0.0;
  double y = 1.0;
  int l = 1;
  int m = 1;
  std::vector<double> times;

  // t_j for m <= j <= l + 1, boundary slots included.
  double at(int j) const;
  void validate() const;
};

/// Down/right path from (x, m) to (y, l): times = (t_m, ..., t_{l-1}),
/// non-decreasing, with t_{m-1} = x and t_l = y.
struct DownRightPathCoords {
  double x = 0.0;
  double y = 1.0;
  int m = 1;
  int l = 1;
  std::vector<double> times;

  double at(int j) const;
  void validate() const;
};

// Level occupied at time t by the step path with the given jump times.
int level_at(const PathCoords& path, double t);

struct Endpoint {
  double t = 0.0;
  int level = 1;
};

/// Start points U = ((x_i, l_i)) and end points V = ((y_i, m_i)).
struct EndpointPair {
  std::vector<Endpoint> U;
  std::vector<Endpoint> V;

  int k() const { return static_cast<int>(U.size()); }
  // Structural checks only; emptiness of the polytope is reported by the
  // free energy as -infinity.
  void validate() const;
};

// Coordinate t_{path, level}; level l_i + 1 and m_i are the boundary slots.
struct TimeSlot {
  int path = 0;
  int level = 0;
};

struct OrderConstraint {
  TimeSlot before;
  TimeSlot after;
};

enum class EndpointKind { Vk, Vpk, Unk };

// V_k(x) = ((x,1)..(x,k)), V'_k(x) = ((x,2)..(x,k+1)), U_{n,k}(x) = ((x,n-k+1)..(x,n)).
std::vector<Endpoint> special_endpoints(EndpointKind kind, double x, int k, int n);

// t_{i,j1} <= t_{i+1,j2+1} for adjacent paths and j1 >= j2.
std::vector<OrderConstraint> noncrossing_inequalities(const EndpointPair& pair);
// t_{i,j+1} <= t_{i,j} inside each path, boundary slots included.
std::vector<OrderConstraint> ordering_constraints(const EndpointPair& pair);

bool is_boundary(const EndpointPair& pair, TimeSlot s);
double boundary_value(const EndpointPair& pair, TimeSlot s);

// Membership of stacked coordinates (times[i] as in PathCoords) in Q[U -> V].
bool in_polytope(const EndpointPair& pair, const std::vector<std::vector<double>>& times);

double path_energy(const Environment& env, const PathCoords& path);
double down_path_energy(const Environment& env, const DownRightPathCoords& path);

}  // namespace polylab
