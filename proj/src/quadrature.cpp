// SPDX-License-Identifier: Apache-2.0
#include "polylab/quadrature.hpp"

#include <algorithm>
#include <string>

#include "polylab/error.hpp"

namespace polylab {

double log_sum(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::size_t Mesh::index_of(double time) const {
  auto it = std::lower_bound(t.begin(), t.end(), time - tolerance);
  if (it == t.end() || std::abs(*it - time) > tolerance)
    throw RangeError("time " + std::to_string(time) + " is not a quadrature node");
  return static_cast<std::size_t>(it - t.begin());
}

Mesh make_mesh(const Environment& env, double lo, double hi, std::span<const double> extra) {
  if (!env.contains(lo) || !env.contains(hi)) throw RangeError("quadrature range outside the environment domain");
  if (!(lo <= hi)) throw RangeError("quadrature range is empty");
  const double tol = 1e-9 * env.step();
  std::vector<std::pair<double, std::ptrdiff_t>> nodes;
  auto add = [&](double t) {
    const std::ptrdiff_t g = env.grid_index(t);
    nodes.emplace_back(g >= 0 ? env.node(static_cast<std::size_t>(g)) : t, g);
  };
  add(lo);
  add(hi);
  for (double t : extra)
    if (t >= lo - tol && t <= hi + tol) add(std::clamp(t, lo, hi));
  const double first = std::ceil((lo - env.left()) / env.step());
  for (auto j = static_cast<std::size_t>(std::max(0.0, first)); j < env.points(); ++j) {
    const double t = env.node(j);
    if (t >= hi - tol) break;
    if (t > lo + tol) nodes.emplace_back(t, static_cast<std::ptrdiff_t>(j));
  }
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  });
  Mesh mesh;
  mesh.tolerance = tol;
  for (const auto& [t, g] : nodes) {
    if (!mesh.t.empty() && t - mesh.t.back() <= tol) {
      if (mesh.grid.back() < 0 && g >= 0) {
        mesh.t.back() = t;
        mesh.grid.back() = g;
      }
      continue;
    }
    mesh.t.push_back(t);
    mesh.grid.push_back(g);
  }
  mesh.log_half_dt.resize(mesh.size() - 1);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    mesh.log_half_dt[i] = std::log(0.5 * (mesh.t[i + 1] - mesh.t[i]));
  return mesh;
}

Mesh affine_image(const Mesh& mesh, double a2, double a3) {
  Mesh out;
  out.tolerance = mesh.tolerance / a2;
  out.grid = mesh.grid;
  out.t.reserve(mesh.size());
  for (double t : mesh.t) out.t.push_back((t - a3) / a2);
  out.log_half_dt.resize(mesh.log_half_dt.size());
  for (std::size_t i = 0; i + 1 < out.size(); ++i)
    out.log_half_dt[i] = std::log(0.5 * (out.t[i + 1] - out.t[i]));
  return out;
}

std::vector<double> values_on(const Environment& env, int level, const Mesh& mesh) {
  std::vector<double> out(mesh.size());
  const auto curve = env.curve(level);
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const std::ptrdiff_t g = mesh.grid[i];
    if (g > 0 || (g == 0 && env.log_exponent(level) == 0.0))
      out[i] = curve[static_cast<std::size_t>(g)];
    else
      out[i] = env(level, mesh.t[i]);
  }
  return out;
}

void chain_step_log(std::span<const double> log_half_dt, std::span<const double> log_w,
                    std::size_t lo, std::size_t hi, std::span<const double> prev,
                    std::span<double> out) {
  const std::size_t n = log_w.size();
  for (std::size_t i = 0; i < std::min(lo + 1, n); ++i) out[i] = kNegInf;
  double g0 = log_w[lo] + prev[lo];
  if (prev[lo] == kNegInf) g0 = kNegInf;
  double acc = kNegInf;
  for (std::size_t i = lo; i < hi; ++i) {
    double g1 = log_w[i + 1] + prev[i + 1];
    if (prev[i + 1] == kNegInf) g1 = kNegInf;
    const double cell = log_half_dt[i] + log_add(g0, g1);
    acc = log_add(acc, cell);
    out[i + 1] = acc;
    g0 = g1;
  }
  for (std::size_t i = hi + 1; i < n; ++i) out[i] = acc;
}

void chain_step_max(std::span<const double> log_w, std::size_t lo, std::size_t hi,
                    std::span<const double> prev, std::span<double> out) {
  const std::size_t n = log_w.size();
  for (std::size_t i = 0; i < lo; ++i) out[i] = kNegInf;
  double acc = kNegInf;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (prev[i] != kNegInf) acc = std::max(acc, log_w[i] + prev[i]);
    out[i] = acc;
  }
  for (std::size_t i = hi + 1; i < n; ++i) out[i] = acc;
}

}  // namespace polylab
