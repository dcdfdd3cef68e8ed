// SPDX-License-Identifier: Apache-2.0
#include "polylab/free_energy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "polylab/error.hpp"

namespace polylab {

namespace {

void check_levels(const Environment& env, int high, int low) {
  if (low < 1 || high < low) throw RangeError("levels must satisfy 1 <= low <= high");
  if (high > env.curves())
    throw RangeError("level " + std::to_string(high) + " above the top curve " +
                     std::to_string(env.curves()));
}

void check_interval(const Environment& env, double x, double y) {
  if (!(x < y)) throw RangeError("free energy needs x < y");
  if (!env.contains(x) || !env.contains(y)) throw RangeError("endpoint outside the environment domain");
  if (env.singular() && x <= env.left() + 1e-9 * env.step())
    throw RangeError("endpoint at the singular left edge of a transformed environment");
}

}  // namespace

ForwardProfile::ForwardProfile(const Environment& env, const Mesh& mesh, double x, int l,
                               int lowest, Beta beta)
    : mesh_(&mesh), l_(l), lowest_(lowest), beta_(beta.value()) {
  check_levels(env, l, lowest);
  if (!(beta_ > 0.0)) throw ConfigError("beta must be positive");
  start_ = mesh.index_of(x);
  size_ = mesh.size();
  const int levels = l - lowest + 1;
  values_.resize(static_cast<std::size_t>(levels) * size_);
  for (int j = lowest; j <= l; ++j) {
    const auto v = values_on(env, j, mesh);
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>((j - lowest) * size_));
  }
  auto row = [&](std::vector<double>& m, int r) {
    return std::span<double>(m.data() + static_cast<std::size_t>(r) * size_, size_);
  };
  base_ = row(values_, l - lowest)[start_];
  log_i_.assign(static_cast<std::size_t>(levels) * size_, kNegInf);
  std::fill(log_i_.begin() + static_cast<std::ptrdiff_t>(start_), log_i_.begin() + static_cast<std::ptrdiff_t>(size_), 0.0);
  std::vector<double> w(size_);
  const bool inf = beta.is_infinite();
  for (int r = 1; r < levels; ++r) {
    const auto hi = row(values_, l - r + 1 - lowest);
    const auto lo = row(values_, l - r - lowest);
    for (std::size_t i = start_; i < size_; ++i) w[i] = inf ? hi[i] - lo[i] : beta_ * (hi[i] - lo[i]);
    if (inf)
      chain_step_max(w, start_, size_ - 1, row(log_i_, r - 1), row(log_i_, r));
    else
      chain_step_log(mesh.log_half_dt, w, start_, size_ - 1, row(log_i_, r - 1), row(log_i_, r));
  }
}

double ForwardProfile::at(int level, std::size_t node) const {
  if (level < lowest_ || level > l_) throw RangeError("profile level out of range");
  if (node < start_) return kNegInf;
  const std::size_t r = static_cast<std::size_t>(l_ - level);
  const double li = log_i_[r * size_ + node];
  if (li == kNegInf) return kNegInf;
  const double f = values_[static_cast<std::size_t>(level - lowest_) * size_ + node] - base_;
  return std::isinf(beta_) ? li + f : li / beta_ + f;
}

BackwardProfile::BackwardProfile(const Environment& env, const Mesh& mesh, double y, int m,
                                 int highest, Beta beta)
    : mesh_(&mesh), m_(m), highest_(highest), beta_(beta.value()) {
  check_levels(env, highest, m);
  if (!(beta_ > 0.0)) throw ConfigError("beta must be positive");
  end_ = mesh.index_of(y);
  size_ = mesh.size();
  const int levels = highest - m + 1;
  values_.resize(static_cast<std::size_t>(levels) * size_);
  for (int j = m; j <= highest; ++j) {
    const auto v = values_on(env, j, mesh);
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>((j - m) * size_));
  }
  base_ = values_[end_];
  // Sweep on the mirrored mesh: reversed index k = size - 1 - i.
  std::vector<double> dt(mesh.log_half_dt.rbegin(), mesh.log_half_dt.rend());
  const std::size_t lo = size_ - 1 - end_;
  log_j_.assign(static_cast<std::size_t>(levels) * size_, kNegInf);
  std::fill(log_j_.begin() + static_cast<std::ptrdiff_t>(lo), log_j_.begin() + static_cast<std::ptrdiff_t>(size_), 0.0);
  auto row = [&](std::vector<double>& v, int r) {
    return std::span<double>(v.data() + static_cast<std::size_t>(r) * size_, size_);
  };
  std::vector<double> w(size_);
  const bool inf = beta.is_infinite();
  for (int r = 1; r < levels; ++r) {
    const auto up = row(values_, r);
    const auto down = row(values_, r - 1);
    for (std::size_t k = lo; k < size_; ++k) {
      const std::size_t i = size_ - 1 - k;
      w[k] = inf ? up[i] - down[i] : beta_ * (up[i] - down[i]);
    }
    if (inf)
      chain_step_max(w, lo, size_ - 1, row(log_j_, r - 1), row(log_j_, r));
    else
      chain_step_log(dt, w, lo, size_ - 1, row(log_j_, r - 1), row(log_j_, r));
  }
}

double BackwardProfile::at(int level, std::size_t node) const {
  if (level < m_ || level > highest_) throw RangeError("profile level out of range");
  if (node > end_) return kNegInf;
  const std::size_t r = static_cast<std::size_t>(level - m_);
  const double lj = log_j_[r * size_ + (size_ - 1 - node)];
  if (lj == kNegInf) return kNegInf;
  const double f = base_ - values_[r * size_ + node];
  return std::isinf(beta_) ? lj + f : lj / beta_ + f;
}

LogValue single_free_energy(const Environment& env, double x, int l, double y, int m, Beta beta) {
  check_levels(env, l, m);
  check_interval(env, x, y);
  if (!(beta.value() > 0.0)) throw ConfigError("beta must be positive");
  if (l == m) return {env(m, y) - env(m, x)};
  const Mesh mesh = make_mesh(env, x, y);
  const ForwardProfile profile(env, mesh, x, l, m, beta);
  return {profile.at(m, mesh.size() - 1)};
}

LogValue down_right_free_energy(const Environment& env, double x, int m, double y, int l) {
  check_levels(env, l, m);
  check_interval(env, x, y);
  const double ends = env(l, y) - env(m, x);
  if (l == m) return {ends};
  const Mesh mesh = make_mesh(env, x, y);
  const std::size_t size = mesh.size();
  std::vector<double> prev(size, 0.0), next(size), w(size);
  std::vector<double> lower = values_on(env, m, mesh);
  for (int j = m; j < l; ++j) {
    const std::vector<double> upper = values_on(env, j + 1, mesh);
    for (std::size_t i = 0; i < size; ++i) w[i] = upper[i] - lower[i];
    chain_step_log(mesh.log_half_dt, w, 0, size - 1, prev, next);
    std::swap(prev, next);
    lower = upper;
  }
  return {ends - prev[size - 1]};
}

double free_energy_slice(const Environment& env, double x, int l, double y, int m, int k, double z) {
  if (k < m || k > l - 1) throw RangeError("slice level k must satisfy m <= k <= l - 1");
  if (!(z > x) || !(z < y)) throw RangeError("slice point must lie strictly between x and y");
  return single_free_energy(env, x, l, z, k + 1) + single_free_energy(env, z, k, y, m);
}

PolytopeLayout analyze_polytope(const EndpointPair& pair) {
  pair.validate();
  PolytopeLayout out;
  std::map<std::pair<int, int>, int> id;
  for (int i = 0; i < pair.k(); ++i)
    for (int j = pair.U[i].level; j > pair.V[i].level; --j) {
      id[{i, j}] = static_cast<int>(out.free.size());
      out.free.push_back({i, j});
    }
  const std::size_t nv = out.free.size();
  std::vector<double> lb(nv, -HUGE_VAL), ub(nv, HUGE_VAL);

  auto constraints = ordering_constraints(pair);
  const auto cross = noncrossing_inequalities(pair);
  constraints.insert(constraints.end(), cross.begin(), cross.end());
  auto var = [&](TimeSlot s) { return is_boundary(pair, s) ? -1 : id.at({s.path, s.level}); };

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : constraints) {
      const int a = var(c.before), b = var(c.after);
      const double a_lo = a < 0 ? boundary_value(pair, c.before) : lb[static_cast<std::size_t>(a)];
      const double b_hi = b < 0 ? boundary_value(pair, c.after) : ub[static_cast<std::size_t>(b)];
      if (a < 0 && b < 0) {
        if (a_lo > b_hi) out.empty = true;
        continue;
      }
      if (b >= 0 && a_lo > lb[static_cast<std::size_t>(b)]) {
        lb[static_cast<std::size_t>(b)] = a_lo;
        changed = true;
      }
      if (a >= 0 && b_hi < ub[static_cast<std::size_t>(a)]) {
        ub[static_cast<std::size_t>(a)] = b_hi;
        changed = true;
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (lb[v] > ub[v]) out.empty = true;
  if (out.empty) {
    out.free.clear();
    return out;
  }

  std::vector<int> remap(nv, -1);
  std::vector<TimeSlot> free;
  for (std::size_t v = 0; v < nv; ++v) {
    if (lb[v] == ub[v]) {
      out.pinned.emplace_back(out.free[v], lb[v]);
      continue;
    }
    remap[v] = static_cast<int>(free.size());
    free.push_back(out.free[v]);
    out.lower.push_back(lb[v]);
    out.upper.push_back(ub[v]);
  }
  out.free = std::move(free);
  for (const auto& c : constraints) {
    const int a = var(c.before), b = var(c.after);
    if (a < 0 || b < 0) continue;
    const int ra = remap[static_cast<std::size_t>(a)], rb = remap[static_cast<std::size_t>(b)];
    if (ra >= 0 && rb >= 0) out.edges.emplace_back(ra, rb);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::vector<std::vector<int>> linear_extensions(const PolytopeLayout& layout) {
  const int p = layout.dimension();
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(p));
  for (const auto& [a, b] : layout.edges) preds[static_cast<std::size_t>(b)].push_back(a);
  std::vector<std::vector<int>> out;
  std::vector<int> order;
  std::vector<char> used(static_cast<std::size_t>(p), 0);
  std::function<void()> extend = [&]() {
    if (static_cast<int>(order.size()) == p) {
      out.push_back(order);
      return;
    }
    for (int v = 0; v < p; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      const auto& pv = preds[static_cast<std::size_t>(v)];
      if (!std::all_of(pv.begin(), pv.end(), [&](int u) { return used[static_cast<std::size_t>(u)] != 0; }))
        continue;
      used[static_cast<std::size_t>(v)] = 1;
      order.push_back(v);
      extend();
      order.pop_back();
      used[static_cast<std::size_t>(v)] = 0;
    }
  };
  extend();
  return out;
}

LogValue multi_free_energy(const Environment& env, const EndpointPair& pair, const MultiOptions& options) {
  const PolytopeLayout layout = analyze_polytope(pair);
  for (int i = 0; i < pair.k(); ++i) {
    check_levels(env, pair.U[i].level, pair.V[i].level);
    check_interval(env, pair.U[i].t, pair.V[i].t);
  }
  if (layout.empty) return {kNegInf};
  const int p = layout.dimension();
  if (p > options.d_max)
    throw CapabilityError("polytope dimension " + std::to_string(p) + " exceeds D_max = " +
                          std::to_string(options.d_max));

  double constant = 0.0;
  for (int i = 0; i < pair.k(); ++i)
    constant += env(pair.V[i].level, pair.V[i].t) - env(pair.U[i].level, pair.U[i].t);
  for (const auto& [slot, c] : layout.pinned) constant += env(slot.level, c) - env(slot.level - 1, c);
  if (p == 0) return {constant};

  const double lo = *std::min_element(layout.lower.begin(), layout.lower.end());
  const double hi = *std::max_element(layout.upper.begin(), layout.upper.end());
  std::vector<double> extra(layout.lower);
  extra.insert(extra.end(), layout.upper.begin(), layout.upper.end());
  const Mesh mesh = make_mesh(env, lo, hi, extra);
  const std::size_t size = mesh.size();

  std::map<int, std::vector<double>> weight_by_level;
  std::vector<const std::vector<double>*> weight(static_cast<std::size_t>(p));
  std::vector<std::size_t> lo_idx(static_cast<std::size_t>(p)), hi_idx(static_cast<std::size_t>(p));
  for (int v = 0; v < p; ++v) {
    const int level = layout.free[static_cast<std::size_t>(v)].level;
    auto it = weight_by_level.find(level);
    if (it == weight_by_level.end()) {
      std::vector<double> up = values_on(env, level, mesh);
      const std::vector<double> down = values_on(env, level - 1, mesh);
      for (std::size_t i = 0; i < size; ++i) up[i] -= down[i];
      it = weight_by_level.emplace(level, std::move(up)).first;
    }
    weight[static_cast<std::size_t>(v)] = &it->second;
    lo_idx[static_cast<std::size_t>(v)] = mesh.index_of(layout.lower[static_cast<std::size_t>(v)]);
    hi_idx[static_cast<std::size_t>(v)] = mesh.index_of(layout.upper[static_cast<std::size_t>(v)]);
  }

  const auto orders = linear_extensions(layout);
  std::vector<double> pieces(orders.size(), kNegInf);
  auto run = [&](std::size_t e, std::vector<double>& a, std::vector<double>& b) {
    std::fill(a.begin(), a.end(), 0.0);
    for (int v : orders[e]) {
      const auto uv = static_cast<std::size_t>(v);
      chain_step_log(mesh.log_half_dt, *weight[uv], lo_idx[uv], hi_idx[uv], a, b);
      std::swap(a, b);
    }
    pieces[e] = a[size - 1];
  };
  const auto count = static_cast<std::ptrdiff_t>(orders.size());
  if (options.execution == Execution::parallel && count > 1) {
#pragma omp parallel num_threads(worker_threads())
    {
      std::vector<double> a(size), b(size);
#pragma omp for schedule(dynamic)
      for (std::ptrdiff_t e = 0; e < count; ++e) run(static_cast<std::size_t>(e), a, b);
    }
  } else {
    std::vector<double> a(size), b(size);
    for (std::ptrdiff_t e = 0; e < count; ++e) run(static_cast<std::size_t>(e), a, b);
  }
  return {log_sum(pieces) + constant};
}

}  // namespace polylab
