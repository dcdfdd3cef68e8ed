// SPDX-License-Identifier: Apache-2.0
#pragma once

// Check suites shared by the command line and the acceptance runner. Each
// suite returns a JSON report whose "pass" field is the verdict; reports hold
// no timings so reruns are byte-identical.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "polylab/grsk.hpp"
#include "polylab/parallel.hpp"
#include "polylab/scaling.hpp"
#include "polylab/stats.hpp"

namespace polylab {

struct SuiteReport {
  bool pass = true;
  nlohmann::json json;
};

// Uniform grids are given as cells per unit length.
double grid_step(int cells_per_unit);

// %.17g, the CSV number format.
std::string format_number(double v);

// Environment for the identity suites: a named family or, for names of the
// form "random:<seed>", a random smooth family; n curves on [0, 1],
// normalized at the origin.
Environment smooth_environment(const std::string& family, int n, int cells_per_unit);

struct OracleConfig {
  int cases = 50;
  int n_max = 4;
  int depth_max = 3;  // l - m
  int grid = 4096;
  double T = 16.0;    // the scaled inverse temperature (T/2)^{1/3} is tested too
  std::uint64_t seed = 7;
  int points = 20;    // Gauss-Legendre nodes per dimension
  double tol = 1e-4;
};

// Chain quadrature against the nested-quadrature oracle; the error is
// |a - b| / max(1, |b|).
SuiteReport oracle_suite(const OracleConfig& cfg);

struct IdentitySuiteConfig {
  int n_min = 2;
  int n_max = 4;
  int wf_n_max = 6;
  int grid = 4096;
  std::vector<std::string> families{"sin-poly", "random:1", "random:2"};
  std::vector<IdentityId> identities;  // empty: all
  double T = 16.0;
  int d_max = 6;
  std::map<IdentityId, double> tol;    // missing entries use default_tolerance
};

double default_tolerance(IdentityId id);
SuiteReport identity_suite(const IdentitySuiteConfig& cfg);

struct ConvergenceConfig {
  IdentityId identity = IdentityId::greene;
  std::vector<int> grids{512, 1024, 2048, 4096};
  int n_min = 2;
  int n_max = 4;
  std::string family = "sin-poly";
  double min_ratio = 1.5;
  // Residuals at round-off level carry no refinement information.
  double floor = 1e-10;
  double tol = 1e-3;
  int d_max = 6;
};

SuiteReport convergence_suite(const ConvergenceConfig& cfg);

struct BrownianIdentityConfig {
  int n_min = 2;
  int n_max = 6;
  int grid = 8192;
  int samples = 3;
  std::uint64_t seed = 11;
  double tol = 1e-2;
};

// The W f / W R f identity on Brownian curves over [0, 1].
SuiteReport brownian_identity_suite(const BrownianIdentityConfig& cfg);

struct InequalityConfig {
  int samples = 100;
  int n = 8;
  double T = 2.0;
  int grid = 1024;
  std::uint64_t seed = 20240601;
  int design_points = 200;
  double eps = 0.25;
  double slack_floor = -1e-8;
  double mass_tol = 1e-3;
  double ab_tol = 1e-9;
};

enum class DesignKind { quantile, airy, airy_sheet, decay, f_monotone, y_monotone };

std::string to_string(DesignKind k);

struct DesignPoint {
  DesignKind kind = DesignKind::quantile;
  int k = 1;
  double x1 = 0.0;
  double x2 = 0.0;  // x_bar for the airy and decay kinds
  double y1 = 0.0;
  double y2 = 0.0;
  double z = 0.0;

  nlohmann::json to_json() const;
};

// Deterministic design; the scaled kinds are on the rescaled axis.
std::vector<DesignPoint> inequality_design(const InequalityConfig& cfg);
SuiteReport inequality_suite(const InequalityConfig& cfg);

struct BusemannConfig {
  int n = 64;
  double T = 2.0;
  double x = 1.0;
  double x_second = 1.25;  // second ray for the monotonicity-in-x check
  double y1 = 0.0;
  double y2 = 0.5;
  int k_max = 0;           // 0: admissible maximum
  int replicas = 50;
  int grid = 256;
  std::uint64_t seed = 20240601;
  double slack_floor = -1e-8;
};

struct BusemannResult {
  SuiteReport report;
  std::vector<BusemannRow> rows;
};

BusemannResult busemann_suite(const BusemannConfig& cfg);

struct RemainderTailConfig {
  int n = 8;
  double T = 2.0;
  double x = 1.0;
  double x_bar = 1.0;
  double eps = 0.5;
  int k_max = 0;  // 0: largest k with -kT/x_bar inside the support
  int replicas = 1000;
  int grid = 256;
  std::uint64_t seed = 20240601;
};

struct RemainderTailRow {
  int k = 0;
  std::size_t hits = 0;
  std::size_t trials = 0;
  double p_hat = 0.0;
  WilsonInterval ci;
};

struct RemainderTailResult {
  SuiteReport report;
  std::vector<RemainderTailRow> rows;
};

// Empirical P(|R_k(x, -kT/x_bar)| > eps k) with Wilson intervals. There is
// nothing to assert, so the report always passes.
RemainderTailResult remainder_tail_suite(const RemainderTailConfig& cfg);

struct DistributionSuiteConfig {
  std::vector<DistCheck> checks{DistCheck::sheet_shift, DistCheck::f_downright, DistCheck::wrz_law};
  DistParams params;  // params.seed is the documented seed
  int seeds = 10;     // seed, seed + 1, ...
  int pass_count = 8;
  double p_min = 0.01;
};

SuiteReport distribution_suite(const DistributionSuiteConfig& cfg);

struct KconcaveConfig {
  int points = 100000;
  double lo = 0.25;
  double hi = 4.0;
  double eps = 0.25;
  std::vector<int> ks{1, 3};
  std::vector<double> Ts{2.0, 16.0};
};

SuiteReport kconcave_suite(const KconcaveConfig& cfg);

}  // namespace polylab
