// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "polylab/error.hpp"
#include "polylab/grsk.hpp"

namespace polylab {

namespace {

constexpr std::array<std::pair<IdentityId, std::string_view>, 8> kNames{{
    {IdentityId::greene, "greene"},
    {IdentityId::invariance, "invariance"},
    {IdentityId::wf_wrf, "wf-wrf"},
    {IdentityId::searrow, "searrow"},
    {IdentityId::z_reverse, "z-reverse"},
    {IdentityId::pileup, "pileup"},
    {IdentityId::change_of_variables, "change-of-variables"},
    {IdentityId::slice_reassembly, "slice-reassembly"},
}};

EndpointPair make_pair(std::vector<Endpoint> u, std::vector<Endpoint> v) {
  EndpointPair p{std::move(u), std::move(v)};
  p.validate();
  return p;
}

double greene(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  if (p.k < 1 || p.k > n) throw RangeError("greene needs 1 <= k <= n");
  const std::ptrdiff_t j = env.grid_index(p.t);
  if (j < 0) throw ConfigError("greene evaluates W f at a grid point; t is off the grid");
  const Environment w = w_transform(env);
  double lhs = 0.0;
  for (int i = 1; i <= p.k; ++i) lhs += w.sample(i, static_cast<std::size_t>(j));
  const auto pair = make_pair(special_endpoints(EndpointKind::Unk, env.left(), p.k, n),
                              special_endpoints(EndpointKind::Vk, p.t, p.k, n));
  return std::abs(lhs - multi_free_energy(env, pair, p.multi));
}

double invariance(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  if (p.xs.size() != p.ys.size() || p.xs.empty()) throw ConfigError("invariance needs matching xs and ys");
  for (std::size_t i = 1; i < p.xs.size(); ++i)
    if (!(p.xs[i - 1] < p.xs[i]) || !(p.ys[i - 1] < p.ys[i]))
      throw ConfigError("invariance is implemented for strictly ordered endpoints only");
  std::vector<Endpoint> u, v;
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    u.push_back({p.xs[i], n});
    v.push_back({p.ys[i], 1});
  }
  const auto pair = make_pair(std::move(u), std::move(v));
  const Environment w = w_transform(env);
  return std::abs(multi_free_energy(env, pair, p.multi) - multi_free_energy(w, pair, p.multi));
}

double wf_wrf(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  if (p.k < 1 || p.k > n - 1) throw RangeError("wf-wrf needs 1 <= k <= n-1");
  double z = 0.0;
  // R_z f is shifted to vanish at the origin; the down/right free energy
  // ignores per-curve constants and W maps them to constants.
  const Environment wr = w_transform(normalize(reverse_environment(env, p.z, &z)));
  if (!(p.x > env.left() && p.x < z)) throw RangeError("wf-wrf needs 0 < x < z");
  const Environment w = w_transform(env);
  const double lhs = single_free_energy(w, p.x, n, z, p.k + 1) +
                     down_right_free_energy(wr, z - p.x, 1, z, p.k + 1);
  return std::abs(lhs - w(p.k + 1, z));
}

double searrow(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  if (p.k < 1 || p.k > n - 1) throw RangeError("searrow needs 1 <= k <= n-1");
  const auto left = make_pair(special_endpoints(EndpointKind::Vpk, p.x, p.k, n),
                              special_endpoints(EndpointKind::Vk, p.y, p.k, n));
  const auto right = make_pair(special_endpoints(EndpointKind::Vk, p.x, p.k + 1, n),
                               special_endpoints(EndpointKind::Vk, p.y, p.k + 1, n));
  const double lhs = multi_free_energy(env, left, p.multi) + down_right_free_energy(env, p.x, 1, p.y, p.k + 1);
  return std::abs(lhs - multi_free_energy(env, right, p.multi));
}

double z_reverse(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  const std::size_t k = p.xs.size();
  if (k == 0 || p.ys.size() != k) throw ConfigError("z-reverse needs matching xs and ys");
  auto level = [&](const std::vector<int>& v, std::size_t i, int fallback) {
    if (v.empty()) return fallback;
    if (v.size() != k) throw ConfigError("z-reverse level lists must match xs");
    return v[i];
  };
  double z = 0.0;
  const Environment r = reverse_environment(env, p.z, &z);
  std::vector<Endpoint> u, v, ut, vt;
  for (std::size_t i = 0; i < k; ++i) {
    u.push_back({p.xs[i], level(p.ls, i, n)});
    v.push_back({p.ys[i], level(p.ms, i, 1)});
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t mirror = k - 1 - i;
    ut.push_back({z - v[mirror].t, n + 1 - v[mirror].level});
    vt.push_back({z - u[mirror].t, n + 1 - u[mirror].level});
  }
  const auto pair = make_pair(std::move(u), std::move(v));
  const auto mirrored = make_pair(std::move(ut), std::move(vt));
  return std::abs(multi_free_energy(env, pair, p.multi) - multi_free_energy(r, mirrored, p.multi));
}

double pileup(const Environment& env, const IdentityParams& p) {
  const int n = env.curves();
  if (p.k < 1 || p.k > n - 1) throw RangeError("pileup needs 1 <= k <= n-1");
  const std::size_t count = static_cast<std::size_t>(p.k + 1);
  const auto repeated = make_pair(std::vector<Endpoint>(count, {p.x, n}), std::vector<Endpoint>(count, {p.y, 1}));
  const auto packed = make_pair(special_endpoints(EndpointKind::Unk, p.x, p.k + 1, n),
                                special_endpoints(EndpointKind::Vk, p.y, p.k + 1, n));
  return std::abs(multi_free_energy(env, repeated, p.multi) - multi_free_energy(env, packed, p.multi));
}

double change_of_variables(const Environment& env, const IdentityParams& p) {
  const int l = p.l > 0 ? p.l : env.curves();
  const AffineMap& a = p.affine;
  const Environment g = affine_environment(env, a);
  const double lhs = single_free_energy(g, p.x, l, p.y, p.m, p.beta);
  const Beta inner = p.beta.is_infinite() ? Beta::infinite() : Beta{a.a1 * p.beta.value()};
  double rhs = a.a1 * single_free_energy(env, a.a2 * p.x + a.a3, l, a.a2 * p.y + a.a3, p.m, inner) +
               a.a4 * (p.y - p.x);
  if (!p.beta.is_infinite()) rhs -= (l - p.m) * std::log(a.a2) / p.beta.value();
  return std::abs(lhs - rhs);
}

double slice_reassembly(const Environment& env, const IdentityParams& p) {
  const int l = p.l > 0 ? p.l : env.curves();
  if (p.k < p.m || p.k > l - 1) throw RangeError("slice-reassembly needs m <= k <= l-1");
  const Mesh mesh = make_mesh(env, p.x, p.y);
  const ForwardProfile fwd(env, mesh, p.x, l, p.k + 1);
  const BackwardProfile bwd(env, mesh, p.y, p.m, p.k);
  double acc = kNegInf;
  for (std::size_t c = 0; c + 1 < mesh.size(); ++c) {
    const double a = fwd.at(p.k + 1, c) + bwd.at(p.k, c);
    const double b = fwd.at(p.k + 1, c + 1) + bwd.at(p.k, c + 1);
    acc = log_add(acc, mesh.log_half_dt[c] + log_add(a, b));
  }
  return std::abs(acc - single_free_energy(env, p.x, l, p.y, p.m));
}

}  // namespace

std::string_view to_string(IdentityId id) {
  for (const auto& [k, name] : kNames)
    if (k == id) return name;
  return "unknown";
}

IdentityId identity_from_string(std::string_view name) {
  for (const auto& [k, s] : kNames)
    if (s == name) return k;
  throw ConfigError("unknown identity '" + std::string(name) + "'");
}

std::vector<IdentityId> all_identities() {
  std::vector<IdentityId> ids;
  for (const auto& entry : kNames) ids.push_back(entry.first);
  return ids;
}

double identity_residual(const Environment& env, IdentityId id, const IdentityParams& params) {
  switch (id) {
    case IdentityId::greene: return greene(env, params);
    case IdentityId::invariance: return invariance(env, params);
    case IdentityId::wf_wrf: return wf_wrf(env, params);
    case IdentityId::searrow: return searrow(env, params);
    case IdentityId::z_reverse: return z_reverse(env, params);
    case IdentityId::pileup: return pileup(env, params);
    case IdentityId::change_of_variables: return change_of_variables(env, params);
    case IdentityId::slice_reassembly: return slice_reassembly(env, params);
  }
  throw ConfigError("unknown identity");
}

}  // namespace polylab
