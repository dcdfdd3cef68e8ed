// SPDX-License-Identifier: Apache-2.0
#include "polylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "polylab/error.hpp"
#include "polylab/rng.hpp"

namespace polylab {

std::vector<std::vector<double>> map_replicas(
    std::size_t count, std::uint64_t master,
    const std::function<std::vector<double>(std::uint64_t, std::uint64_t)>& fn, Execution execution) {
  std::vector<std::vector<double>> rows(count);
  std::vector<std::exception_ptr> errors(count);
  const auto total = static_cast<std::int64_t>(count);
  auto one = [&](std::int64_t r) {
    const auto u = static_cast<std::uint64_t>(r);
    try {
      rows[static_cast<std::size_t>(r)] = fn(u, replica_seed(master, u));
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  };
  if (execution == Execution::serial) {
    for (std::int64_t r = 0; r < total; ++r) one(r);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
    for (std::int64_t r = 0; r < total; ++r) one(r);
  }
  for (std::size_t r = 0; r < count; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw DataError("replica " + std::to_string(r) + " failed: " + e.what());
    }
  }
  return rows;
}

nlohmann::json ReplicaSpec::to_json() const {
  return {{"quantity", quantity}, {"args", args}, {"replicas", replicas}, {"master_seed", master_seed},
          {"n", n},           {"T", T},        {"h", h},               {"l_max", l_max}};
}

std::vector<std::pair<std::string, std::string>> replica_quantities() {
  return {
      {"sheet", "x y"},
      {"sheet-b", "x y"},
      {"line", "i x"},
      {"f-field", "k x z"},
      {"g-field", "k z y"},
      {"line-down-right", "k x z"},
      {"reversed-down-right", "k x z"},
      {"reversed-w", "zp level t"},
      {"brownian", "i t"},
  };
}

namespace {

std::size_t expected_args(const std::string& quantity) {
  for (const auto& [name, args] : replica_quantities())
    if (name == quantity) return static_cast<std::size_t>(std::count(args.begin(), args.end(), ' ') + 1);
  throw ConfigError("unknown quantity '" + quantity + "'");
}

int as_level(double v) {
  const double r = std::round(v);
  if (std::abs(r - v) > 0.0) throw ConfigError("level argument must be an integer");
  return static_cast<int>(r);
}

}  // namespace

double evaluate_quantity(const OYSample& s, const std::string& q, std::span<const double> a) {
  if (a.size() != expected_args(q)) throw ConfigError("quantity '" + q + "' takes " + std::to_string(expected_args(q)) + " arguments");
  if (q == "sheet") return kpz_sheet_prelimit(s, a[0], a[1]);
  if (q == "sheet-b") return kpz_sheet_prelimit(s, a[0], a[1], SheetForm::b_form);
  if (q == "line") return kpz_line_prelimit(s, as_level(a[0]), a[1]);
  if (q == "f-field") return f_field(s, as_level(a[0]), a[1], a[2]);
  if (q == "g-field") return g_field(s, as_level(a[0]), a[1], a[2]);
  if (q == "line-down-right") return line_down_right(s, as_level(a[0]), a[1], a[2]);
  if (q == "reversed-down-right") return reversed_down_right(s, as_level(a[0]), a[1], a[2]);
  if (q == "reversed-w") return reversed_w_value(s, a[0], as_level(a[1]), a[2]);
  if (q == "brownian") return s.brownian()(as_level(a[0]), a[1]);
  throw ConfigError("unknown quantity '" + q + "'");
}

SampleTable run_replicas(const ReplicaSpec& spec, Execution execution) {
  expected_args(spec.quantity);
  double l_max = spec.l_max;
  if (l_max <= 0.0) {
    double big = 0.0;
    for (double v : spec.args) big = std::max(big, std::abs(v));
    l_max = default_l_max(spec.n, spec.T, big);
  }
  const auto rows = map_replicas(spec.replicas, spec.master_seed, [&](std::uint64_t, std::uint64_t seed) {
    const OYSample s(seed, spec.n, spec.T, l_max, spec.h);
    return std::vector<double>{evaluate_quantity(s, spec.quantity, spec.args)};
  }, execution);
  SampleTable t;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    t.replica.push_back(r);
    t.value.push_back(rows[r][0]);
  }
  return t;
}

double kolmogorov_p_value(double statistic, std::size_t n1, std::size_t n2) {
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * sum) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw UsageError("KS test needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_p_value(d, x.size(), y.size());
  return r;
}

std::string to_string(DistCheck c) {
  switch (c) {
    case DistCheck::sheet_shift: return "sheet-shift";
    case DistCheck::f_downright: return "f-downright";
    case DistCheck::wrz_law: return "wrz-law";
  }
  return "unknown";
}

DistCheck dist_check_from_string(const std::string& name) {
  for (DistCheck c : {DistCheck::sheet_shift, DistCheck::f_downright, DistCheck::wrz_law})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown distributional check '" + name + "'");
}

nlohmann::json DistReport::to_json() const {
  return {{"check", check},   {"n", n},           {"T", T},         {"k", k},
          {"N", N},           {"statistic", statistic}, {"p_value", p_value}, {"mean_a", mean_a},
          {"mean_b", mean_b}, {"var_a", var_a},   {"var_b", var_b}, {"seed", seed}};
}

namespace {

void moments(const std::vector<double>& v, double& mean, double& var) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
}

}  // namespace

DistReport distributional_check(DistCheck which, const DistParams& p, Execution execution) {
  const double s = std::sqrt(static_cast<double>(p.n) * p.T);
  double reach = 0.0;
  switch (which) {
    case DistCheck::sheet_shift: reach = s + std::max(p.y, p.y - p.x); break;
    case DistCheck::f_downright: reach = s + std::max(p.z, 0.0); break;
    case DistCheck::wrz_law: reach = std::max(s + p.z, p.t); break;
  }
  reach = std::max(reach, s);
  // Only the field up to the furthest endpoint enters; one unit of margin.
  const double l_max = reach + 1.0;
  const auto rows = map_replicas(p.replicas, p.seed, [&](std::uint64_t, std::uint64_t seed) {
    const OYSample smp(seed, p.n, p.T, l_max, p.h);
    switch (which) {
      case DistCheck::sheet_shift:
        return std::vector<double>{kpz_sheet_prelimit(smp, p.x, p.y), kpz_line_prelimit(smp, 1, p.y - p.x)};
      case DistCheck::f_downright:
        return std::vector<double>{f_field(smp, p.k, p.x, p.z), -line_down_right(smp, p.k, p.x, p.z)};
      case DistCheck::wrz_law:
        return std::vector<double>{reversed_w_value(smp, s + p.z, 1, p.t), smp.Y()(1, p.t)};
    }
    return std::vector<double>{};
  }, execution);
  std::vector<double> a, b;
  for (const auto& r : rows) {
    a.push_back(r[0]);
    b.push_back(r[1]);
  }
  DistReport rep;
  rep.check = to_string(which);
  rep.n = p.n;
  rep.T = p.T;
  rep.k = p.k;
  rep.N = p.replicas;
  rep.seed = p.seed;
  const KsResult ks = ks_two_sample(a, b);
  rep.statistic = ks.statistic;
  rep.p_value = ks.p_value;
  moments(a, rep.mean_a, rep.var_a);
  moments(b, rep.mean_b, rep.var_b);
  return rep;
}

}  // namespace polylab
