// SPDX-License-Identifier: Apache-2.0
#include "polylab/paths.hpp"

#include <string>

#include "polylab/error.hpp"

namespace polylab {

double PathCoords::at(int j) const {
  if (j == l + 1) return x;
  if (j == m) return y;
  if (j < m || j > l + 1) throw RangeError("path slot out of range");
  return times[static_cast<std::size_t>(l - j)];
}

void PathCoords::validate() const {
  if (!(x < y)) throw RangeError("path needs x < y");
  if (m < 1 || l < m) throw RangeError("path needs l >= m >= 1");
  if (times.size() != static_cast<std::size_t>(l - m)) throw RangeError("path needs l - m jump times");
  double prev = x;
  for (double t : times) {
    if (t < prev) throw RangeError("jump times must be non-decreasing");
    prev = t;
  }
  if (prev > y) throw RangeError("jump times must not exceed y");
}

double DownRightPathCoords::at(int j) const {
  if (j == m - 1) return x;
  if (j == l) return y;
  if (j < m - 1 || j > l) throw RangeError("path slot out of range");
  return times[static_cast<std::size_t>(j - m)];
}

void DownRightPathCoords::validate() const {
  if (!(x < y)) throw RangeError("path needs x < y");
  if (m < 1 || l < m) throw RangeError("down/right path needs l >= m >= 1");
  if (times.size() != static_cast<std::size_t>(l - m)) throw RangeError("path needs l - m jump times");
  double prev = x;
  for (double t : times) {
    if (t < prev) throw RangeError("jump times must be non-decreasing");
    prev = t;
  }
  if (prev > y) throw RangeError("jump times must not exceed y");
}

int level_at(const PathCoords& path, double t) {
  // Level j on [t_{j+1}, t_j), level m from t_{m+1} to y.
  int level = path.l;
  for (int j = path.l; j > path.m; --j) {
    if (t >= path.at(j)) level = j - 1;
    else break;
  }
  return level;
}

void EndpointPair::validate() const {
  if (U.empty() || U.size() != V.size()) throw ConfigError("endpoint pair needs k >= 1 starts and ends");
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (!(U[i].t < V[i].t)) throw ConfigError("endpoint pair needs x_i < y_i");
    if (V[i].level < 1 || U[i].level < V[i].level) throw ConfigError("endpoint pair needs l_i >= m_i >= 1");
    if (i + 1 < U.size() && (U[i].t > U[i + 1].t || V[i].t > V[i + 1].t))
      throw ConfigError("endpoint pair needs ordered starts and ends");
  }
}

std::vector<Endpoint> special_endpoints(EndpointKind kind, double x, int k, int n) {
  if (k < 1 || k > n) throw RangeError("special endpoints need 1 <= k <= n");
  std::vector<Endpoint> out;
  for (int i = 1; i <= k; ++i) {
    switch (kind) {
      case EndpointKind::Vk: out.push_back({x, i}); break;
      case EndpointKind::Vpk: out.push_back({x, i + 1}); break;
      case EndpointKind::Unk: out.push_back({x, n - k + i}); break;
    }
  }
  return out;
}

std::vector<OrderConstraint> noncrossing_inequalities(const EndpointPair& pair) {
  std::vector<OrderConstraint> out;
  for (int i = 0; i + 1 < pair.k(); ++i) {
    const int m1 = pair.V[i].level, l1 = pair.U[i].level;
    const int m2 = pair.V[i + 1].level, l2 = pair.U[i + 1].level;
    for (int j1 = m1; j1 <= l1; ++j1)
      for (int j2 = m2; j2 <= l2; ++j2)
        if (j1 >= j2) out.push_back({{i, j1}, {i + 1, j2 + 1}});
  }
  return out;
}

std::vector<OrderConstraint> ordering_constraints(const EndpointPair& pair) {
  std::vector<OrderConstraint> out;
  for (int i = 0; i < pair.k(); ++i)
    for (int j = pair.V[i].level; j <= pair.U[i].level; ++j) out.push_back({{i, j + 1}, {i, j}});
  return out;
}

bool is_boundary(const EndpointPair& pair, TimeSlot s) {
  return s.level == pair.U[s.path].level + 1 || s.level == pair.V[s.path].level;
}

double boundary_value(const EndpointPair& pair, TimeSlot s) {
  if (s.level == pair.U[s.path].level + 1) return pair.U[s.path].t;
  if (s.level == pair.V[s.path].level) return pair.V[s.path].t;
  throw RangeError("slot is not a boundary slot");
}

bool in_polytope(const EndpointPair& pair, const std::vector<std::vector<double>>& times) {
  auto value = [&](TimeSlot s) {
    if (is_boundary(pair, s)) return boundary_value(pair, s);
    return times[static_cast<std::size_t>(s.path)][static_cast<std::size_t>(pair.U[s.path].level - s.level)];
  };
  for (const auto& c : ordering_constraints(pair))
    if (value(c.before) > value(c.after)) return false;
  for (const auto& c : noncrossing_inequalities(pair))
    if (value(c.before) > value(c.after)) return false;
  return true;
}

double path_energy(const Environment& env, const PathCoords& p) {
  p.validate();
  if (p.l > env.curves()) throw RangeError("path level above the top curve");
  double e = 0.0;
  for (int j = p.m; j <= p.l; ++j) e += env(j, p.at(j)) - env(j, p.at(j + 1));
  return e;
}

double down_path_energy(const Environment& env, const DownRightPathCoords& p) {
  p.validate();
  if (p.l > env.curves()) throw RangeError("path level above the top curve");
  double e = 0.0;
  for (int j = p.m; j <= p.l; ++j) e += env(j, p.at(j)) - env(j, p.at(j - 1));
  return e;
}

}  // namespace polylab
