// SPDX-License-Identifier: Apache-2.0
// Reference values for single-path free energies that only share
// path_energy with the sweep code.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <vector>

#include "polylab/error.hpp"
#include "polylab/free_energy.hpp"

namespace polylab {

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  const auto un = static_cast<unsigned>(n);
  for (int i = 1; i <= n; ++i) {
    double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(un, z);
      const double q = std::legendre(un - 1, z);
      dp = n * (z * p - q) / (z * z - 1.0);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double p = std::legendre(un, z), q = std::legendre(un - 1, z);
    dp = n * (z * p - q) / (z * z - 1.0);
    rule.nodes.push_back(0.5 * (1.0 - z));
    rule.weights.push_back(1.0 / ((1.0 - z * z) * dp * dp));
  }
  return rule;
}

double nested_gauss(const Environment& env, PathCoords& path, double beta, const GaussRule& rule) {
  const std::size_t dim = path.times.size();
  std::function<double(std::size_t, double)> level = [&](std::size_t d, double lower) -> double {
    if (d == dim) return beta * path_energy(env, path);
    const double width = path.y - lower;
    if (width <= 0.0) return kNegInf;
    double acc = kNegInf;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = lower + width * rule.nodes[q];
      path.times[d] = s;
      acc = log_add(acc, std::log(width * rule.weights[q]) + level(d + 1, s));
    }
    return acc;
  };
  return level(0, path.x) / beta;
}

using Tuple = std::vector<std::int64_t>;

double grid_search(const Environment& env, PathCoords& path, int points) {
  const std::size_t dim = path.times.size();
  const double span = path.y - path.x;
  constexpr std::size_t keep = 8;
  std::vector<std::pair<double, Tuple>> best;

  auto energy = [&](const Tuple& idx, double delta) {
    for (std::size_t d = 0; d < dim; ++d)
      path.times[d] = std::min(path.y, path.x + static_cast<double>(idx[d]) * delta);
    return path_energy(env, path);
  };
  auto offer = [&](double e, const Tuple& idx, std::vector<std::pair<double, Tuple>>& pool) {
    for (const auto& p : pool)
      if (p.second == idx) return;
    pool.emplace_back(e, idx);
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (pool.size() > keep) pool.pop_back();
  };
  // Ordered tuples with idx[d] in [lo[d], hi[d]].
  auto scan = [&](const Tuple& lo, const Tuple& hi, double delta, std::vector<std::pair<double, Tuple>>& pool) {
    Tuple idx(dim);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t d, std::int64_t floor) {
      if (d == dim) {
        offer(energy(idx, delta), idx, pool);
        return;
      }
      for (std::int64_t v = std::max(lo[d], floor); v <= hi[d]; ++v) {
        idx[d] = v;
        rec(d + 1, v);
      }
    };
    rec(0, 0);
  };

  std::int64_t cells = points;
  double delta = span / static_cast<double>(cells);
  scan(Tuple(dim, 0), Tuple(dim, cells), delta, best);
  while (delta > 1e-11 * span) {
    cells *= 2;
    delta = span / static_cast<double>(cells);
    std::vector<std::pair<double, Tuple>> next;
    for (auto [e, c] : best) {
      Tuple lo(dim), hi(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        c[d] *= 2;
        lo[d] = std::max<std::int64_t>(0, c[d] - 4);
        hi[d] = std::min<std::int64_t>(cells, c[d] + 4);
      }
      scan(lo, hi, delta, next);
    }
    best = std::move(next);
  }
  return best.front().first;
}

}  // namespace

LogValue brute_force_single(const Environment& env, double x, int l, double y, int m, Beta beta,
                            int points_per_dim) {
  if (l - m > 4) throw CapabilityError("brute-force oracle supports at most 4 jump times");
  if (points_per_dim < 2) throw ConfigError("brute-force oracle needs at least 2 points per dimension");
  PathCoords path{x, y, l, m, std::vector<double>(static_cast<std::size_t>(l - m), x)};
  path.validate();
  if (l == m) return {path_energy(env, path)};
  if (beta.is_infinite()) return {grid_search(env, path, points_per_dim)};
  return {nested_gauss(env, path, beta.value(), gauss_legendre(points_per_dim))};
}

}  // namespace polylab
