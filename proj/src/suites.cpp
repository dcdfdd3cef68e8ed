// SPDX-License-Identifier: Apache-2.0
#include "polylab/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <tuple>

#include "polylab/error.hpp"
#include "polylab/free_energy.hpp"
#include "polylab/oy_polymer.hpp"
#include "polylab/rng.hpp"

namespace polylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// JSON has no infinities; an empty minimum is written as null.
nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

double grid_step(int cells_per_unit) {
  if (cells_per_unit <= 0) throw ConfigError("grid must be a positive number of cells per unit length");
  return 1.0 / static_cast<double>(cells_per_unit);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Environment smooth_environment(const std::string& family, int n, int cells_per_unit) {
  const double h = grid_step(cells_per_unit);
  const std::string prefix = "random:";
  if (family.rfind(prefix, 0) == 0) {
    const auto seed = std::stoull(family.substr(prefix.size()));
    return build_environment(n, 0.0, 1.0, h, random_smooth_family(n, seed), true);
  }
  return build_environment(n, 0.0, 1.0, h, named_family(family, n), true);
}

// ---------------------------------------------------------------------------
// Oracle equivalence

SuiteReport oracle_suite(const OracleConfig& cfg) {
  if (cfg.n_max < 2 || cfg.depth_max < 1) throw ConfigError("oracle suite needs n_max >= 2 and depth_max >= 1");
  const std::array<Beta, 3> betas{Beta{1.0}, Beta{std::cbrt(cfg.T / 2.0)}, Beta::infinite()};
  const CounterRng rng(cfg.seed, 0);
  SuiteReport rep;
  nlohmann::json cases = nlohmann::json::array();
  double worst = 0.0;
  for (int c = 0; c < cfg.cases; ++c) {
    auto u = [&](int d) { return rng.uniform(static_cast<std::uint64_t>(c) * 8 + static_cast<std::uint64_t>(d)); };
    const int n = 2 + static_cast<int>(u(0) * (cfg.n_max - 1));
    const int depth = 1 + static_cast<int>(u(1) * std::min(cfg.depth_max, n - 1));
    const int m = 1 + static_cast<int>(u(2) * (n - depth));
    const int l = m + depth;
    const double x = 0.5 * u(3);
    const double y = 0.5 + 0.5 * u(4);
    const std::uint64_t env_seed = replica_seed(cfg.seed, static_cast<std::uint64_t>(c));
    const Environment env =
        build_environment(n, 0.0, 1.0, grid_step(cfg.grid), random_smooth_family(n, env_seed), false);
    for (const Beta b : betas) {
      const double a = single_free_energy(env, x, l, y, m, b);
      const double o = brute_force_single(env, x, l, y, m, b, cfg.points);
      const double err = std::abs(a - o) / std::max(1.0, std::abs(o));
      worst = std::max(worst, err);
      const bool ok = err <= cfg.tol;
      rep.pass = rep.pass && ok;
      cases.push_back({{"case", c}, {"n", n}, {"l", l}, {"m", m}, {"x", x}, {"y", y},
                       {"beta", b.is_infinite() ? nlohmann::json("inf") : nlohmann::json(b.value())},
                       {"chain", a}, {"oracle", o}, {"error", err}, {"pass", ok}});
    }
  }
  rep.json = {{"suite", "oracle"}, {"cases", cfg.cases}, {"grid", cfg.grid}, {"T", cfg.T},
              {"seed", cfg.seed}, {"points", cfg.points}, {"tol", cfg.tol}, {"max_error", worst},
              {"pass", rep.pass}, {"rows", cases}};
  return rep;
}

// ---------------------------------------------------------------------------
// Identity residuals

double default_tolerance(IdentityId id) {
  switch (id) {
    case IdentityId::change_of_variables:
      return 1e-6;
    default:
      return 1e-3;
  }
}

namespace {

struct Variant {
  std::string label;
  int k = 0;
  IdentityParams params;
};

std::vector<Variant> identity_variants(IdentityId id, int n, double T, int d_max) {
  std::vector<Variant> out;
  IdentityParams base;
  base.multi.d_max = d_max;
  auto with_k = [&](int lo, int hi) {
    for (int k = lo; k <= hi; ++k) {
      IdentityParams p = base;
      p.k = k;
      out.push_back({"k=" + std::to_string(k), k, p});
    }
  };
  switch (id) {
    case IdentityId::greene: with_k(1, n); break;
    case IdentityId::wf_wrf:
    case IdentityId::searrow:
    case IdentityId::pileup:
    case IdentityId::slice_reassembly: with_k(1, n - 1); break;
    case IdentityId::invariance: {
      IdentityParams one = base;
      one.xs = {0.2};
      one.ys = {0.75};
      out.push_back({"k=1", 1, one});
      out.push_back({"k=2", 2, base});
      break;
    }
    case IdentityId::z_reverse: {
      IdentityParams one = base;
      one.xs = {0.25};
      one.ys = {0.75};
      out.push_back({"paths=1", 1, one});
      out.push_back({"paths=2", 2, base});
      break;
    }
    case IdentityId::change_of_variables: {
      for (const Beta b : {Beta{1.0}, Beta{std::cbrt(T / 2.0)}, Beta::infinite()}) {
        IdentityParams p = base;
        p.beta = b;
        out.push_back({b.is_infinite() ? "beta=inf" : "beta=" + format_number(b.value()), 0, p});
      }
      break;
    }
  }
  return out;
}

}  // namespace

SuiteReport identity_suite(const IdentitySuiteConfig& cfg) {
  const std::vector<IdentityId> ids = cfg.identities.empty() ? all_identities() : cfg.identities;
  SuiteReport rep;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json worst = nlohmann::json::object();
  for (const IdentityId id : ids) {
    const auto tol_it = cfg.tol.find(id);
    const double tol = tol_it != cfg.tol.end() ? tol_it->second : default_tolerance(id);
    const int n_hi = id == IdentityId::wf_wrf ? std::max(cfg.n_max, cfg.wf_n_max) : cfg.n_max;
    double max_res = 0.0;
    for (const auto& family : cfg.families) {
      for (int n = cfg.n_min; n <= n_hi; ++n) {
        const Environment env = smooth_environment(family, n, cfg.grid);
        for (const Variant& v : identity_variants(id, n, cfg.T, cfg.d_max)) {
          nlohmann::json row = {{"identity", std::string(to_string(id))}, {"family", family}, {"n", n},
                                {"case", v.label}, {"tol", tol}};
          try {
            const double r = identity_residual(env, id, v.params);
            const bool ok = r <= tol;
            rep.pass = rep.pass && ok;
            max_res = std::max(max_res, r);
            row["residual"] = r;
            row["pass"] = ok;
          } catch (const CapabilityError& e) {
            row["skipped"] = e.what();
          }
          rows.push_back(std::move(row));
        }
      }
    }
    worst[std::string(to_string(id))] = {{"max_residual", max_res}, {"tol", tol}};
  }
  rep.json = {{"suite", "identities"}, {"grid", cfg.grid}, {"families", cfg.families}, {"n_min", cfg.n_min},
              {"n_max", cfg.n_max}, {"wf_n_max", cfg.wf_n_max}, {"pass", rep.pass}, {"summary", worst},
              {"rows", rows}};
  return rep;
}

SuiteReport convergence_suite(const ConvergenceConfig& cfg) {
  if (cfg.grids.size() < 2) throw ConfigError("convergence needs at least two grids");
  for (std::size_t i = 1; i < cfg.grids.size(); ++i)
    if (cfg.grids[i] != 2 * cfg.grids[i - 1]) throw ConfigError("convergence grids must double at each step");
  SuiteReport rep;
  nlohmann::json rows = nlohmann::json::array();
  double min_ratio = kInf;
  double max_finest = 0.0;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    const auto variants = identity_variants(cfg.identity, n, 16.0, cfg.d_max);
    for (const Variant& v : variants) {
      std::vector<double> res;
      try {
        for (int g : cfg.grids) res.push_back(identity_residual(smooth_environment(cfg.family, n, g), cfg.identity, v.params));
      } catch (const CapabilityError& e) {
        rows.push_back({{"n", n}, {"case", v.label}, {"skipped", e.what()}});
        continue;
      }
      nlohmann::json ratios = nlohmann::json::array();
      bool ok = res.back() <= cfg.tol;
      max_finest = std::max(max_finest, res.back());
      for (std::size_t i = 0; i + 1 < res.size(); ++i) {
        if (res[i] <= cfg.floor) {
          ratios.push_back(nullptr);
          continue;
        }
        const double r = res[i + 1] > 0.0 ? res[i] / res[i + 1] : kInf;
        ratios.push_back(finite_or_null(r));
        min_ratio = std::min(min_ratio, r);
        ok = ok && r >= cfg.min_ratio;
      }
      rep.pass = rep.pass && ok;
      rows.push_back({{"n", n}, {"case", v.label}, {"residuals", res}, {"ratios", ratios}, {"pass", ok}});
    }
  }
  rep.json = {{"suite", "convergence"}, {"identity", std::string(to_string(cfg.identity))}, {"grids", cfg.grids},
              {"family", cfg.family}, {"min_ratio_required", cfg.min_ratio}, {"floor", cfg.floor},
              {"tol", cfg.tol}, {"min_ratio", finite_or_null(min_ratio)}, {"max_finest_residual", max_finest},
              {"pass", rep.pass}, {"rows", rows}};
  return rep;
}

SuiteReport brownian_identity_suite(const BrownianIdentityConfig& cfg) {
  const double h = grid_step(cfg.grid);
  std::vector<std::pair<int, int>> cases;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n)
    for (int k = 1; k <= n - 1; ++k) cases.emplace_back(n, k);
  const auto table = map_replicas(static_cast<std::size_t>(cfg.samples), cfg.seed, [&](std::uint64_t, std::uint64_t seed) {
    std::vector<double> out;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
      const Environment env = brownian_environment(n, 1.0, h, seed);
      for (int k = 1; k <= n - 1; ++k) {
        IdentityParams p;
        p.k = k;
        out.push_back(identity_residual(env, IdentityId::wf_wrf, p));
      }
    }
    return out;
  });
  SuiteReport rep;
  nlohmann::json rows = nlohmann::json::array();
  double worst = 0.0;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const double v = table[r][c];
      worst = std::max(worst, v);
      rows.push_back({{"sample", r}, {"n", cases[c].first}, {"k", cases[c].second}, {"residual", v}});
    }
  }
  rep.pass = worst <= cfg.tol;
  rep.json = {{"suite", "brownian-identity"}, {"identity", "wf-wrf"}, {"grid", cfg.grid},
              {"samples", cfg.samples}, {"seed", cfg.seed}, {"tol", cfg.tol}, {"max_residual", worst},
              {"pass", rep.pass}, {"rows", rows}};
  return rep;
}

// ---------------------------------------------------------------------------
// Inequality sweep

std::string to_string(DesignKind k) {
  switch (k) {
    case DesignKind::quantile: return "quantile";
    case DesignKind::airy: return "airy";
    case DesignKind::airy_sheet: return "airy-sheet";
    case DesignKind::decay: return "decay";
    case DesignKind::f_monotone: return "f-monotone";
    case DesignKind::y_monotone: return "y-monotone";
  }
  return "unknown";
}

nlohmann::json DesignPoint::to_json() const {
  return {{"kind", to_string(kind)}, {"k", k}, {"x1", x1}, {"x2", x2}, {"y1", y1}, {"y2", y2}, {"z", z}};
}

namespace {

// Dyadic values keep every design point on the sample grid.
const std::vector<double> kXs{0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
const std::vector<double> kYs{-0.5, 0.0, 0.5, 1.0, 1.5};
const std::vector<double> kZs{-2.0, -1.5, -1.0, -0.5, 0.0, 0.25};
const std::vector<double> kXsScaled{0.25, 0.5, 0.75, 1.0};
const std::vector<double> kYsScaled{-0.25, 0.0, 0.25, 0.5};
const std::vector<double> kZsScaled{-1.0, -0.75, -0.5, -0.25};
const std::vector<double> kXsDecay{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};

constexpr std::array<DesignKind, 20> kPattern{
    DesignKind::quantile,   DesignKind::quantile,   DesignKind::quantile,   DesignKind::quantile,
    DesignKind::quantile,   DesignKind::quantile,   DesignKind::airy,       DesignKind::airy,
    DesignKind::airy,       DesignKind::airy_sheet, DesignKind::airy_sheet, DesignKind::airy_sheet,
    DesignKind::decay,      DesignKind::decay,      DesignKind::f_monotone, DesignKind::f_monotone,
    DesignKind::f_monotone, DesignKind::y_monotone, DesignKind::y_monotone, DesignKind::y_monotone};

double y_ceiling() { return kYs.back(); }

}  // namespace

std::vector<DesignPoint> inequality_design(const InequalityConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("the inequality sweep needs n >= 2");
  if (cfg.T < 2.0) throw ConfigError("the scaled bounds are asserted for T >= 2 only");
  const double s = std::sqrt(cfg.n * cfg.T);
  const double h = grid_step(cfg.grid);
  const double a = ScaledQuery::make(cfg.T).space;
  const CounterRng rng(cfg.seed, 0x5eed);
  std::uint64_t draw = 0;
  auto pick = [&](const std::vector<double>& v) {
    return v[std::min(v.size() - 1, static_cast<std::size_t>(rng.uniform(draw++) * static_cast<double>(v.size())))];
  };
  auto pick_k = [&] { return 1 + static_cast<int>(rng.uniform(draw++) * (cfg.n - 1)); };
  auto ordered = [&](const std::vector<double>& v, bool strict) {
    double p = pick(v), q = pick(v);
    while (strict && p == q) q = pick(v);
    return std::make_pair(std::min(p, q), std::max(p, q));
  };
  auto inside = [&](double z, double lo, double hi) { return z > lo + h && z < hi - h; };

  std::vector<DesignPoint> out;
  // The airy and decay kinds alternate between x_bar >= x and x_bar < x.
  int airy_seen = 0, decay_seen = 0;
  for (int i = 0; i < cfg.design_points; ++i) {
    const DesignKind kind = kPattern[static_cast<std::size_t>(i) % kPattern.size()];
    const bool below = kind == DesignKind::airy ? airy_seen++ % 2 == 1 : decay_seen++ % 2 == 1;
    auto branch = [&](const DesignPoint& d) { return below == (d.x2 < d.x1); };
    bool found = false;
    for (int attempt = 0; attempt < 100000 && !found; ++attempt) {
      DesignPoint d;
      d.kind = kind;
      d.k = pick_k();
      switch (kind) {
        case DesignKind::quantile: {
          std::tie(d.x1, d.x2) = ordered(kXs, false);
          std::tie(d.y1, d.y2) = ordered(kYs, false);
          d.z = pick(kZs);
          found = inside(d.z, -s + d.x2, d.y1);
          break;
        }
        case DesignKind::airy: {
          d.x1 = pick(kXsScaled);
          d.x2 = pick(kXsScaled);
          d.y1 = pick(kYsScaled);
          d.z = airy_quantile_zbar(d.k, d.x2);
          found = branch(d) && inside(a * d.z, -s + a * std::max(d.x1, d.x2), a * d.y1);
          break;
        }
        case DesignKind::airy_sheet: {
          d.x1 = pick(kXsScaled);
          std::tie(d.y1, d.y2) = ordered(kYsScaled, false);
          d.z = pick(kZsScaled);
          found = inside(a * d.z, -s + a * d.x1, a * d.y1);
          break;
        }
        case DesignKind::decay: {
          d.x1 = pick(kXsDecay);
          d.x2 = pick(kXsDecay);
          d.y1 = pick(kYs);
          d.z = -d.k * cfg.T / d.x2;
          const bool box = std::min(d.x1, d.x2) >= cfg.eps && std::max(d.x1, d.x2) <= 1.0 / cfg.eps;
          found = box && branch(d) && inside(d.z, -s + std::max(d.x1, d.x2), d.y1) && s + d.y1 > std::max(d.x1, d.x2);
          break;
        }
        case DesignKind::f_monotone:
        case DesignKind::y_monotone: {
          std::tie(d.x1, d.x2) = ordered(kXs, true);
          found = true;
          break;
        }
      }
      if (found) out.push_back(d);
    }
    if (!found) throw ConfigError("no admissible " + to_string(kind) + " design point for n = " + std::to_string(cfg.n));
  }
  return out;
}

namespace {

enum Family : std::size_t {
  ff_a, ff_b, gg_a, gg_b, hh_b0, hh_a0, airy_a, airy_b, airysheet_b, airysheet_a,
  decay_a, decay_b, f_monotone, y_monotone, tail_monotone, family_count
};

constexpr std::array<const char*, family_count> kFamilyNames{
    "ff_a", "ff_b", "gg_a", "gg_b", "hh_b0", "hh_a0", "airy_a", "airy_b", "airysheet_b", "airysheet_a",
    "decay_a", "decay_b", "f_monotone", "y_monotone", "tail_monotone"};

// Per-sample row: (min slack, design index) per family, then the largest
// mass error and the largest |A + B - 1|.
constexpr std::size_t kRowSize = 2 * family_count + 2;

struct SampleMins {
  std::vector<double> row = std::vector<double>(kRowSize, 0.0);
  SampleMins() {
    for (std::size_t f = 0; f < family_count; ++f) {
      row[2 * f] = kInf;
      row[2 * f + 1] = -1.0;
    }
  }
  void add(Family f, double slack, std::size_t index) {
    if (slack < row[2 * f]) {
      row[2 * f] = slack;
      row[2 * f + 1] = static_cast<double>(index);
    }
  }
  void mass(double v) { row[2 * family_count] = std::max(row[2 * family_count], v); }
  void ab(double v) { row[2 * family_count + 1] = std::max(row[2 * family_count + 1], v); }
};

void insert_sorted(std::vector<double>& v, double x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

std::vector<double> evaluate_design(const OYSample& smp, const std::vector<DesignPoint>& design,
                                    const InequalityConfig& cfg) {
  const ScaledQuery q = ScaledQuery::make(cfg.T);
  const double a = q.space;
  const double s = smp.constants().s;
  SampleMins mins;
  for (int k = 1; k <= cfg.n - 1; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < design.size(); ++i)
      if (design[i].k == k) idx.push_back(i);
    if (idx.empty()) continue;
    std::vector<double> xs, ys{y_ceiling()}, zs, line_ys;
    for (std::size_t i : idx) {
      const DesignPoint& d = design[i];
      switch (d.kind) {
        case DesignKind::quantile:
          insert_sorted(xs, d.x1), insert_sorted(xs, d.x2);
          insert_sorted(ys, d.y1), insert_sorted(ys, d.y2);
          insert_sorted(zs, d.z);
          break;
        case DesignKind::airy:
          insert_sorted(xs, a * d.x1), insert_sorted(xs, a * d.x2);
          insert_sorted(ys, a * d.y1);
          insert_sorted(zs, a * d.z);
          break;
        case DesignKind::airy_sheet:
          insert_sorted(xs, a * d.x1);
          insert_sorted(ys, a * d.y1), insert_sorted(ys, a * d.y2);
          insert_sorted(line_ys, d.y1), insert_sorted(line_ys, d.y2);
          insert_sorted(zs, a * d.z);
          break;
        case DesignKind::decay:
          insert_sorted(xs, d.x1), insert_sorted(xs, d.x2);
          insert_sorted(ys, d.y1);
          insert_sorted(zs, d.z);
          break;
        case DesignKind::f_monotone:
        case DesignKind::y_monotone:
          insert_sorted(xs, d.x1), insert_sorted(xs, d.x2);
          break;
      }
    }
    const PolymerWindow w(smp, k, xs, ys, zs);
    std::unique_ptr<ScaledLineWindow> line;
    if (!line_ys.empty()) line = std::make_unique<ScaledLineWindow>(w, q, line_ys);
    const auto& t = w.mesh().t;

    for (std::size_t i : idx) {
      const DesignPoint& d = design[i];
      switch (d.kind) {
        case DesignKind::quantile: {
          const QuantileSlacks sl = busemann_quantile_bounds(w, {d.k, d.x1, d.x2, d.y1, d.y2, d.z});
          mins.add(ff_a, sl.ff_a, i);
          mins.add(ff_b, sl.ff_b, i);
          mins.add(gg_a, sl.gg_a, i);
          mins.add(gg_b, sl.gg_b, i);
          mins.add(hh_b0, sl.hh_b0, i);
          mins.add(hh_a0, sl.hh_a0, i);
          break;
        }
        case DesignKind::airy:
          mins.add(d.x2 >= d.x1 ? airy_a : airy_b, airy_quantile_slack(w, q, d.x1, d.x2, d.y1), i);
          break;
        case DesignKind::airy_sheet: {
          const AirySheetSlacks sl = airy_sheet_slacks(w, *line, q, d.x1, d.y1, d.y2, d.z);
          mins.add(airysheet_b, sl.b, i);
          mins.add(airysheet_a, sl.a, i);
          break;
        }
        case DesignKind::decay:
          mins.add(d.x2 >= d.x1 ? decay_a : decay_b, quantile_decay_slack(w, d.x1, d.x2, d.y1, cfg.eps), i);
          break;
        case DesignKind::f_monotone:
        case DesignKind::y_monotone: {
          const bool f = d.kind == DesignKind::f_monotone;
          auto diff = [&](double z) {
            return f ? w.F(d.x2, z) - w.F(d.x1, z) : w.Y_path(d.x2, z) - w.Y_path(d.x1, z);
          };
          double worst = kInf;
          double prev = std::numeric_limits<double>::quiet_NaN();
          for (std::size_t j = 0; j < t.size(); ++j) {
            if (!(t[j] > d.x2)) continue;
            const double cur = diff(t[j] - s);
            if (!std::isnan(prev)) worst = std::min(worst, cur - prev);
            prev = cur;
          }
          mins.add(f ? f_monotone : y_monotone, worst, i);
          break;
        }
      }
    }

    // Marginals of every (x, y) pair held by the window.
    for (double x : xs) {
      for (double y : ys) {
        if (!(s + y > x)) continue;
        const PolymerMarginal m = w.marginal(x, y);
        mins.mass(m.normalization_error);
        double tail = kInf;
        for (std::size_t j = 0; j < m.z.size(); ++j) {
          mins.ab(std::abs(std::exp(m.log_lower[j]) + std::exp(m.log_upper[j]) - 1.0));
          if (j > 0) {
            tail = std::min(tail, std::exp(m.log_upper[j - 1]) - std::exp(m.log_upper[j]));
            tail = std::min(tail, std::exp(m.log_lower[j]) - std::exp(m.log_lower[j - 1]));
          }
        }
        mins.add(tail_monotone, tail, idx.front());
      }
    }
  }
  return mins.row;
}

}  // namespace

SuiteReport inequality_suite(const InequalityConfig& cfg) {
  const auto design = inequality_design(cfg);
  const double s = std::sqrt(cfg.n * cfg.T);
  const double h = grid_step(cfg.grid);
  // W at time t reads the Brownian curves on [0, t] only, so the samples
  // need to reach the largest endpoint and no further.
  const double l_max = s + y_ceiling() + 1.0;
  const auto table = map_replicas(static_cast<std::size_t>(cfg.samples), cfg.seed, [&](std::uint64_t, std::uint64_t seed) {
    const OYSample smp(seed, cfg.n, cfg.T, l_max, h);
    return evaluate_design(smp, design, cfg);
  });

  SuiteReport rep;
  bool slack_pass = true;
  nlohmann::json families = nlohmann::json::object();
  for (std::size_t f = 0; f < family_count; ++f) {
    double best = kInf;
    std::size_t sample = 0;
    double index = -1.0;
    for (std::size_t r = 0; r < table.size(); ++r) {
      if (table[r][2 * f] < best) {
        best = table[r][2 * f];
        sample = r;
        index = table[r][2 * f + 1];
      }
    }
    std::size_t count = 0;
    for (const auto& d : design) {
      switch (f) {
        case ff_a: case ff_b: case gg_a: case gg_b: case hh_b0: case hh_a0:
          count += d.kind == DesignKind::quantile; break;
        case airy_a: count += d.kind == DesignKind::airy && d.x2 >= d.x1; break;
        case airy_b: count += d.kind == DesignKind::airy && d.x2 < d.x1; break;
        case airysheet_a: case airysheet_b: count += d.kind == DesignKind::airy_sheet; break;
        case decay_a: count += d.kind == DesignKind::decay && d.x2 >= d.x1; break;
        case decay_b: count += d.kind == DesignKind::decay && d.x2 < d.x1; break;
        case f_monotone: count += d.kind == DesignKind::f_monotone; break;
        case y_monotone: count += d.kind == DesignKind::y_monotone; break;
        default: break;
      }
    }
    const bool ok = !(best < cfg.slack_floor);
    slack_pass = slack_pass && ok;
    nlohmann::json entry = {{"min_slack", finite_or_null(best)}, {"pass", ok}};
    if (f != tail_monotone) entry["design_points"] = count;
    if (index >= 0.0 && f != tail_monotone) {
      entry["sample"] = sample;
      entry["design"] = design[static_cast<std::size_t>(index)].to_json();
    }
    families[kFamilyNames[f]] = entry;
  }
  double mass = 0.0, ab = 0.0;
  for (const auto& row : table) {
    mass = std::max(mass, row[2 * family_count]);
    ab = std::max(ab, row[2 * family_count + 1]);
  }
  const bool marginal_pass = mass <= cfg.mass_tol && ab <= cfg.ab_tol;
  rep.pass = slack_pass && marginal_pass;
  nlohmann::json design_json = nlohmann::json::array();
  for (const auto& d : design) design_json.push_back(d.to_json());
  rep.json = {{"suite", "inequalities"}, {"samples", cfg.samples}, {"n", cfg.n}, {"T", cfg.T},
              {"grid", cfg.grid}, {"seed", cfg.seed}, {"eps", cfg.eps}, {"D", quadratic_constant(cfg.eps)},
              {"slack_floor", cfg.slack_floor}, {"slack_pass", slack_pass}, {"families", families},
              {"max_mass_error", mass}, {"mass_tol", cfg.mass_tol}, {"max_ab_error", ab},
              {"ab_tol", cfg.ab_tol}, {"marginal_pass", marginal_pass}, {"pass", rep.pass},
              {"design", design_json}};
  return rep;
}

// ---------------------------------------------------------------------------
// Busemann rays and remainder tails

BusemannResult busemann_suite(const BusemannConfig& cfg) {
  const double h = grid_step(cfg.grid);
  const int admissible = admissible_k_max(cfg.n, cfg.T, cfg.x, h);
  const int k_max = cfg.k_max > 0 ? cfg.k_max : admissible;
  if (k_max > admissible)
    throw CapabilityError("k_max = " + std::to_string(k_max) + " exceeds the admissible k_max = " +
                          std::to_string(admissible) + " for n = " + std::to_string(cfg.n) + ", T = " +
                          format_number(cfg.T) + ", x = " + format_number(cfg.x));
  if (k_max < 1) throw CapabilityError("no admissible k for this (n, T, x)");
  if (!(cfg.x_second > cfg.x)) throw ConfigError("the second ray needs x_second > x");
  const double s = std::sqrt(cfg.n * cfg.T);
  const double l_max = s + std::max(std::abs(cfg.y1), std::abs(cfg.y2)) + 1.0;
  constexpr std::size_t kCols = 8;
  const auto table = map_replicas(static_cast<std::size_t>(cfg.replicas), cfg.seed, [&](std::uint64_t r, std::uint64_t seed) {
    const OYSample smp(seed, cfg.n, cfg.T, l_max, h);
    const auto rows = busemann_ray_experiment(smp, cfg.x, cfg.y1, cfg.y2, k_max, r);
    std::vector<double> out;
    for (const auto& row : rows) {
      // Delta_k at both rays from one window, so the comparison is on a
      // single mesh.
      const double z1 = -row.k * cfg.T / cfg.x;
      const double z2 = -row.k * cfg.T / cfg.x_second;
      const PolymerWindow w(smp, row.k, {cfg.x}, {cfg.y1, cfg.y2}, {z1, z2});
      const double d1 = w.X_path(z1, cfg.y2) - w.X_path(z1, cfg.y1);
      const double d2 = w.X_path(z2, cfg.y2) - w.X_path(z2, cfg.y1);
      out.insert(out.end(), {row.delta, row.target, row.lower, row.upper, row.log_a, row.log_b, d1, d2});
    }
    return out;
  });

  BusemannResult res;
  double lower_slack = kInf, upper_slack = kInf, mono_slack = kInf;
  for (std::size_t r = 0; r < table.size(); ++r) {
    for (int k = 1; k <= k_max; ++k) {
      const double* v = table[r].data() + static_cast<std::size_t>(k - 1) * kCols;
      BusemannRow row;
      row.replica = r;
      row.k = k;
      row.delta = v[0];
      row.target = v[1];
      row.lower = v[2];
      row.upper = v[3];
      row.log_a = v[4];
      row.log_b = v[5];
      res.rows.push_back(row);
      lower_slack = std::min(lower_slack, row.delta - row.lower);
      upper_slack = std::min(upper_slack, row.upper - row.delta);
      mono_slack = std::min(mono_slack, v[7] - v[6]);
    }
  }
  const bool containment = !(lower_slack < cfg.slack_floor) && !(upper_slack < cfg.slack_floor);
  const bool monotone = !(mono_slack < cfg.slack_floor);
  res.report.pass = containment && monotone;
  res.report.json = {{"suite", "busemann"}, {"n", cfg.n}, {"T", cfg.T}, {"x", cfg.x},
                     {"x_second", cfg.x_second}, {"y1", cfg.y1}, {"y2", cfg.y2}, {"k_max", k_max},
                     {"admissible_k_max", admissible}, {"replicas", cfg.replicas}, {"grid", cfg.grid},
                     {"seed", cfg.seed}, {"min_lower_slack", finite_or_null(lower_slack)},
                     {"min_upper_slack", finite_or_null(upper_slack)},
                     {"min_monotone_slack", finite_or_null(mono_slack)}, {"slack_floor", cfg.slack_floor},
                     {"containment_pass", containment}, {"monotone_pass", monotone}, {"pass", res.report.pass}};
  return res;
}

RemainderTailResult remainder_tail_suite(const RemainderTailConfig& cfg) {
  const double h = grid_step(cfg.grid);
  const double s = std::sqrt(cfg.n * cfg.T);
  if (!(cfg.x > 0.0) || !(cfg.x_bar > 0.0)) throw ConfigError("remainder tail needs x, x_bar > 0");
  int admissible = 0;
  while (admissible + 1 <= cfg.n - 1 && -(admissible + 1) * cfg.T / cfg.x_bar > -s + cfg.x + h) ++admissible;
  const int k_max = cfg.k_max > 0 ? cfg.k_max : admissible;
  if (k_max > admissible || k_max < 1)
    throw CapabilityError("k_max = " + std::to_string(k_max) + " is outside the admissible range 1.." +
                          std::to_string(admissible) + " for n = " + std::to_string(cfg.n));
  const double l_max = s + 1.0;
  const auto table = map_replicas(static_cast<std::size_t>(cfg.replicas), cfg.seed, [&](std::uint64_t, std::uint64_t seed) {
    const OYSample smp(seed, cfg.n, cfg.T, l_max, h);
    std::vector<double> out;
    for (int k = 1; k <= k_max; ++k) out.push_back(remainder_r(smp, k, cfg.x, -k * cfg.T / cfg.x_bar));
    return out;
  });
  RemainderTailResult res;
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 1; k <= k_max; ++k) {
    RemainderTailRow row;
    row.k = k;
    row.trials = table.size();
    for (const auto& r : table)
      if (std::abs(r[static_cast<std::size_t>(k - 1)]) > cfg.eps * k) ++row.hits;
    row.p_hat = row.trials ? static_cast<double>(row.hits) / static_cast<double>(row.trials) : 0.0;
    row.ci = wilson_interval(row.hits, row.trials);
    rows.push_back({{"k", k}, {"hits", row.hits}, {"trials", row.trials}, {"p_hat", row.p_hat},
                    {"wilson_lo", row.ci.lo}, {"wilson_hi", row.ci.hi}});
    res.rows.push_back(row);
  }
  res.report.json = {{"suite", "remainder-tail"}, {"n", cfg.n}, {"T", cfg.T}, {"x", cfg.x},
                     {"x_bar", cfg.x_bar}, {"eps", cfg.eps}, {"k_max", k_max}, {"replicas", cfg.replicas},
                     {"grid", cfg.grid}, {"seed", cfg.seed}, {"pass", true}, {"rows", rows}};
  return res;
}

// ---------------------------------------------------------------------------
// Distributional identities and the concavity gap

SuiteReport distribution_suite(const DistributionSuiteConfig& cfg) {
  if (cfg.seeds < 1) throw ConfigError("distribution suite needs at least one seed");
  SuiteReport rep;
  nlohmann::json checks = nlohmann::json::array();
  for (const DistCheck c : cfg.checks) {
    nlohmann::json runs = nlohmann::json::array();
    int passing = 0;
    bool documented = false;
    for (int j = 0; j < cfg.seeds; ++j) {
      DistParams p = cfg.params;
      p.seed = cfg.params.seed + static_cast<std::uint64_t>(j);
      const DistReport r = distributional_check(c, p);
      const bool ok = r.p_value >= cfg.p_min;
      passing += ok;
      if (j == 0) documented = ok;
      runs.push_back(r.to_json());
    }
    const bool ok = documented && passing >= std::min(cfg.pass_count, cfg.seeds);
    rep.pass = rep.pass && ok;
    checks.push_back({{"check", to_string(c)}, {"documented_seed", cfg.params.seed}, {"documented_pass", documented},
                      {"seeds_passing", passing}, {"seeds", cfg.seeds}, {"pass", ok}, {"runs", runs}});
  }
  rep.json = {{"suite", "distributions"}, {"p_min", cfg.p_min}, {"pass_count", cfg.pass_count},
              {"pass", rep.pass}, {"checks", checks}};
  return rep;
}

SuiteReport kconcave_suite(const KconcaveConfig& cfg) {
  if (cfg.points < 4 || !(cfg.hi > cfg.lo) || cfg.Ts.empty()) throw ConfigError("kconcave sweep needs points >= 4, hi > lo and a T");
  const auto m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cfg.points))));
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = cfg.lo + (cfg.hi - cfg.lo) * i / (m - 1);
  std::size_t violations = 0, diagonal_bad = 0, t_dependent = 0, evaluated = 0;
  double min_margin = kInf;
  for (int k : cfg.ks) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double x = v[static_cast<std::size_t>(i)], xb = v[static_cast<std::size_t>(j)];
        const ConcaveGap g = kconcave_gap(k, cfg.Ts.front(), x, xb, cfg.eps);
        ++evaluated;
        if (g.gap < g.floor) ++violations;
        if (i != j) min_margin = std::min(min_margin, g.gap - g.floor);
        if (i == j && (g.gap != 0.0 || g.floor != 0.0)) ++diagonal_bad;
        for (std::size_t t = 1; t < cfg.Ts.size(); ++t)
          if (kconcave_gap(k, cfg.Ts[t], x, xb, cfg.eps).gap != g.gap) ++t_dependent;
      }
    }
  }
  SuiteReport rep;
  rep.pass = violations == 0 && diagonal_bad == 0 && t_dependent == 0;
  rep.json = {{"suite", "kconcave"}, {"points_per_k", m * m}, {"evaluated", evaluated}, {"ks", cfg.ks},
              {"Ts", cfg.Ts}, {"eps", cfg.eps}, {"D", quadratic_constant(cfg.eps)}, {"lo", cfg.lo},
              {"hi", cfg.hi}, {"violations", violations}, {"diagonal_nonzero", diagonal_bad},
              {"T_dependent", t_dependent}, {"min_margin_off_diagonal", finite_or_null(min_margin)},
              {"pass", rep.pass}};
  return rep;
}

}  // namespace polylab
