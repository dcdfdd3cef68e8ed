// SPDX-License-Identifier: Apache-2.0
#include "polylab/scaling.hpp"

#include <cmath>
#include <string>

#include "polylab/error.hpp"

namespace polylab {

ScaledQuery ScaledQuery::make(double T) {
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  ScaledQuery q;
  q.T = T;
  const double c = std::cbrt(2.0);
  q.height = c / std::cbrt(T);
  q.space = c * std::cbrt(T * T);
  q.shift = q.space / 24.0;
  q.beta = std::cbrt(T / 2.0);
  return q;
}

double rescale_sheet(const OYSample& s, const ScaledQuery& q, double x, double y) {
  return q.height * kpz_sheet_prelimit(s, q.space * x, q.space * y) + q.shift;
}

double rescale_line(const OYSample& s, const ScaledQuery& q, int i, double x) {
  return q.height * kpz_line_prelimit(s, i, q.space * x) + q.shift;
}

double unscale_height(const ScaledQuery& q, double value) { return (value - q.shift) / q.height; }

namespace {

double ray_terms(int k, double x, double z) {
  return 2.0 * std::sqrt(2.0 * k * x) + 2.0 * z * x;
}

double remainder_terms(int k, double T, double x, double z) {
  return k * std::log(x) + z * x / T - std::lgamma(k + 1.0);
}

}  // namespace

double frak_r(const OYSample& s, const ScaledQuery& q, int k, double x, double z) {
  return q.height * f_field(s, k, q.space * x, q.space * z) - ray_terms(k, x, z);
}

double remainder_r(const OYSample& s, int k, double x, double z) {
  if (!(x > 0.0)) throw RangeError("remainder needs x > 0");
  return f_field(s, k, x, z) - remainder_terms(k, s.T(), x, z);
}

double quadratic_constant(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
  return 2.0 / (eps * eps * eps * eps);
}

ConcaveGap kconcave_gap(int k, double T, double x, double x_bar, double eps) {
  if (!(x > 0.0) || !(x_bar > 0.0)) throw RangeError("kconcave gap needs x, x_bar > 0");
  (void)T;  // zbar = -kT/x_bar makes the gap independent of T
  // k (u - 1 - log u) with u = 1 + d; d - log1p(d) loses digits near 0.
  const double d = (x - x_bar) / x_bar;
  double phi;
  if (std::abs(d) < 1e-4)
    phi = d * d * (0.5 - d / 3.0 + d * d / 4.0 - d * d * d / 5.0);
  else
    phi = d - std::log1p(d);
  ConcaveGap g;
  g.gap = k * phi;
  g.floor = k * (x - x_bar) * (x - x_bar) / quadratic_constant(eps);
  return g;
}

// ---------------------------------------------------------------------------

ScaledLineWindow::ScaledLineWindow(const PolymerWindow& w, const ScaledQuery& q, const std::vector<double>& ys)
    : k_(w.k()) {
  const OYSample& s = w.sample();
  const auto& c = s.constants();
  AffineMap map;
  map.a1 = q.height;
  map.a2 = q.space;
  map.a3 = c.s;
  map.a4 = -q.height * c.C1 * q.space;
  for (int i = 1; i <= s.n(); ++i) map.a5.push_back(-q.height * (c.C2 + c.c3(i)) + q.shift);
  env_ = affine_environment(s.Y(), map);
  mesh_ = std::make_shared<const Mesh>(affine_image(w.mesh(), q.space, c.s));
  for (double y : ys) {
    const std::size_t i = mesh_->index_of(y);
    if (!bwd_.contains(i)) bwd_.emplace(i, BackwardProfile(env_, *mesh_, mesh_->t[i], 1, k_, Beta{q.beta}));
  }
}

double ScaledLineWindow::free_energy(double z, double y) const {
  const auto it = bwd_.find(mesh_->index_of(y));
  if (it == bwd_.end()) throw RangeError("y = " + std::to_string(y) + " is not an end point of this scaled window");
  return it->second.at(k_, mesh_->index_of(z));
}

double airy_quantile_zbar(int k, double x_bar) { return -std::sqrt(0.5 * k / x_bar); }

double airy_quantile_slack(const PolymerWindow& w, const ScaledQuery& q, double x, double x_bar, double y) {
  const int k = w.k();
  const double zb = airy_quantile_zbar(k, x_bar);
  const double a = q.space;
  auto sheet = [&](double u) { return q.height * w.H_mu(a * u, a * y) + q.shift; };
  auto r = [&](double u) { return q.height * w.F(a * u, a * zb) - ray_terms(k, u, zb); };
  const double root = 1.0 - std::sqrt(x / x_bar);
  const double quad = std::sqrt(2.0 * k * x_bar) * root * root;
  const double rhs = sheet(x_bar) - sheet(x) - r(x_bar) + r(x);
  const double tail = x_bar >= x ? w.log_A(a * x, a * y, a * zb) : w.log_B(a * x, a * y, a * zb);
  return rhs - (tail + quad);
}

AirySheetSlacks airy_sheet_slacks(const PolymerWindow& w, const ScaledLineWindow& line, const ScaledQuery& q,
                                  double x, double y1, double y2, double z) {
  const double a = q.space;
  const double sheet_diff = q.height * (w.H_mu(a * x, a * y2) - w.H_mu(a * x, a * y1));
  const double line_diff = line.free_energy(z, y2) - line.free_energy(z, y1);
  const double mid = sheet_diff - line_diff;
  AirySheetSlacks out;
  // log(1 - B) = log A and -log(1 - A) = -log B.
  out.b = mid - w.log_A(a * x, a * y1, a * z);
  out.a = -w.log_B(a * x, a * y2, a * z) - mid;
  return out;
}

double quantile_decay_slack(const PolymerWindow& w, double x, double x_bar, double y, double eps) {
  const int k = w.k();
  const double T = w.sample().T();
  const double zb = -k * T / x_bar;
  auto rem = [&](double u) { return w.F(u, zb) - remainder_terms(k, T, u, zb); };
  const double floor = k * (x - x_bar) * (x - x_bar) / quadratic_constant(eps);
  const double rhs = -floor + w.H_mu(x_bar, y) - w.H_mu(x, y) - rem(x_bar) + rem(x);
  const double tail = x_bar >= x ? w.log_A(x, y, zb) : w.log_B(x, y, zb);
  return rhs - tail;
}

int admissible_k_max(int n, double T, double x, double h) {
  if (!(x > 0.0)) throw RangeError("ray parameter x must be positive");
  const double s = std::sqrt(static_cast<double>(n) * T);
  int k = 0;
  while (k + 1 <= n - 1 && -(k + 1) * T / x > -s + h) ++k;
  return k;
}

std::vector<BusemannRow> busemann_ray_experiment(const OYSample& s, double x, double y1, double y2, int k_max,
                                                 std::uint64_t replica) {
  const int admissible = admissible_k_max(s.n(), s.T(), x, s.step());
  if (k_max > admissible)
    throw CapabilityError("k_max = " + std::to_string(k_max) + " exceeds the admissible k_max = " +
                          std::to_string(admissible) + " for n = " + std::to_string(s.n()));
  if (!(y1 <= y2)) throw ConfigError("Busemann experiment needs y1 <= y2");
  std::vector<BusemannRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    const double z = -k * s.T() / x;
    const PolymerWindow w(s, k, {x}, {y1, y2}, {z});
    BusemannRow row;
    row.replica = replica;
    row.k = k;
    row.delta = w.X_path(z, y2) - w.X_path(z, y1);
    row.target = w.H_mu(x, y2) - w.H_mu(x, y1);
    row.log_a = w.log_A(x, y1, z);
    row.log_b = w.log_B(x, y2, z);
    row.lower = row.target + row.log_b;
    row.upper = row.target - row.log_a;
    rows.push_back(row);
  }
  return rows;
}

WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  // The bounds at p = 0 and p = 1 are exact; keep them free of round-off.
  return {hits == 0 ? 0.0 : std::max(0.0, centre - half), hits == trials ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace polylab
