// SPDX-License-Identifier: Apache-2.0
#include "polylab/oy_polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "polylab/error.hpp"
#include "polylab/grsk.hpp"
#include "polylab/rng.hpp"

namespace polylab {

ScalingConstants ScalingConstants::make(int n, double T) {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  ScalingConstants c;
  c.n = n;
  c.T = T;
  const double dn = n;
  c.s = std::sqrt(dn * T);
  const double r = std::sqrt(dn / T);
  c.C1 = r + 0.5;
  c.C2 = dn + 0.5 * c.s - 0.5 * (dn - 1.0) * std::log(r);
  for (int i = 1; i <= n + 1; ++i) c.C3.push_back(-(i - 1) * std::log(T) + std::lgamma(static_cast<double>(i)));
  return c;
}

struct OYSample::Lazy {
  std::once_flag once;
  Environment y;
};

Environment brownian_environment(int n, double length, double h, std::uint64_t seed) {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (!(h > 0.0)) throw ConfigError("grid step must be positive");
  if (!(length > 0.0)) throw ConfigError("sampling interval must have positive length");
  const auto cells = static_cast<std::size_t>(std::ceil(length / h - 1e-9));
  const std::size_t points = cells + 1;
  std::vector<double> data(static_cast<std::size_t>(n) * points);
  std::vector<double> inc(cells);
  const double sd = std::sqrt(h);
  for (int i = 0; i < n; ++i) {
    CounterRng(seed, static_cast<std::uint32_t>(i)).fill_normal(0, inc);
    double* row = data.data() + static_cast<std::size_t>(i) * points;
    row[0] = 0.0;
    for (std::size_t j = 0; j < cells; ++j) row[j + 1] = row[j] + sd * inc[j];
  }
  return Environment(n, 0.0, h, points, std::move(data));
}

OYSample::OYSample(std::uint64_t seed, int n, double T, double l_max, double h)
    : seed_(seed), constants_(ScalingConstants::make(n, T)), lazy_(std::make_shared<Lazy>()) {
  if (!(l_max > constants_.s)) throw ConfigError("L_max must exceed sqrt(n T)");
  brownian_ = brownian_environment(n, l_max, h, seed);
}

const Environment& OYSample::Y() const {
  std::call_once(lazy_->once, [this] { lazy_->y = w_transform(brownian_); });
  return lazy_->y;
}

OYSample sample_brownian_field(int n, double T, double l_max, double h, std::uint64_t seed) {
  return OYSample(seed, n, T, l_max, h);
}

double default_l_max(int n, double T, double y_abs_max) {
  return std::sqrt(static_cast<double>(n) * T) + std::abs(y_abs_max) + 4.0;
}

namespace {

void check_level(const OYSample& s, int i) {
  if (i < 1 || i > s.n()) throw RangeError("level " + std::to_string(i) + " outside 1.." + std::to_string(s.n()));
}

void check_k(const OYSample& s, int k) {
  if (k < 1 || k > s.n() - 1) throw RangeError("k must satisfy 1 <= k <= n-1");
}

void check_time(const OYSample& s, double t) {
  if (!(t > 0.0) || t > s.brownian().right() + 1e-9 * s.step())
    throw RangeError("time " + std::to_string(t) + " outside the sampled range (0, " +
                     std::to_string(s.brownian().right()) + "]");
}

}  // namespace

double kpz_line_prelimit(const OYSample& s, int i, double x) {
  check_level(s, i);
  const auto& c = s.constants();
  check_time(s, c.s + x);
  return s.Y()(i, c.s + x) - c.C1 * x - c.C2 - c.c3(i);
}

double kpz_sheet_prelimit(const OYSample& s, double x, double y, SheetForm form) {
  const auto& c = s.constants();
  if (x < 0.0) throw RangeError("sheet start x must be >= 0 on the one-sided field");
  if (!(y > -c.s + x)) throw RangeError("sheet needs y > -sqrt(nT) + x");
  check_time(s, c.s + y);
  if (form == SheetForm::y_form && x == 0.0) return kpz_line_prelimit(s, 1, y);
  const Environment& env = form == SheetForm::y_form ? s.Y() : s.brownian();
  return single_free_energy(env, x, s.n(), c.s + y, 1) - c.C1 * (y - x) - c.C2;
}

double f_field(const OYSample& s, int k, double x, double z) {
  check_k(s, k);
  const auto& c = s.constants();
  if (!(x > 0.0)) throw RangeError("F needs x > 0");
  check_time(s, c.s + z);
  const double t = c.s + z;
  return single_free_energy(s.Y(), x, s.n(), t, k + 1) - s.Y()(k + 1, t) + c.C1 * x;
}

double g_field(const OYSample& s, int k, double z, double y) {
  check_k(s, k);
  const auto& c = s.constants();
  check_time(s, c.s + z);
  check_time(s, c.s + y);
  const double t = c.s + z;
  return single_free_energy(s.Y(), t, k, c.s + y, 1) + s.Y()(k + 1, t) - c.C1 * y - c.C2;
}

double line_down_right(const OYSample& s, int k, double x, double z) {
  check_k(s, k);
  const auto& c = s.constants();
  check_time(s, c.s + z - x);
  check_time(s, c.s + z);
  return down_right_free_energy(s.Y(), c.s + z - x, 1, c.s + z, k + 1) - c.C1 * x;
}

namespace {
Environment reversed_w(const OYSample& s, double zp, double* snapped) {
  return w_transform(normalize(reverse_environment(s.brownian(), zp, snapped)));
}
}  // namespace

double reversed_down_right(const OYSample& s, int k, double x, double z) {
  check_k(s, k);
  double zp = 0.0;
  const Environment w = reversed_w(s, s.constants().s + z, &zp);
  return down_right_free_energy(w, zp - x, 1, zp, k + 1);
}

double reversed_w_value(const OYSample& s, double zp, int level, double t) {
  check_level(s, level);
  double snapped = 0.0;
  const Environment w = reversed_w(s, zp, &snapped);
  return w(level, t);
}

// ---------------------------------------------------------------------------

PolymerWindow::PolymerWindow(const OYSample& s, int k, std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> zs)
    : sample_(&s), k_(k), s_(s.constants().s) {
  check_k(s, k);
  if (xs.empty() || ys.empty()) throw ConfigError("polymer window needs at least one x and one y");
  for (double x : xs)
    if (!(x > 0.0)) throw RangeError("polymer window needs x > 0");
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double hi = s_ + *std::max_element(ys.begin(), ys.end());
  check_time(s, hi);
  std::vector<double> extra(xs);
  for (double y : ys) extra.push_back(s_ + y);
  for (double z : zs) extra.push_back(s_ + z);
  const Environment& Y = s.Y();
  mesh_ = std::make_shared<const Mesh>(make_mesh(Y, lo, hi, extra));
  y_next_ = values_on(Y, k + 1, *mesh_);
  for (double x : xs) {
    const std::size_t i = mesh_->index_of(x);
    if (!fwd_.contains(i)) fwd_.emplace(i, ForwardProfile(Y, *mesh_, x, s.n(), 1));
  }
  for (double y : ys) {
    if (!(y > -s_ + lo)) throw RangeError("polymer window needs y > -sqrt(nT) + x");
    const std::size_t i = mesh_->index_of(s_ + y);
    if (!bwd_.contains(i)) bwd_.emplace(i, BackwardProfile(Y, *mesh_, s_ + y, 1, k));
  }
  for (const auto& [ix, f] : fwd_) {
    for (const auto& [iy, b] : bwd_) {
      if (iy <= ix) continue;
      const double x = mesh_->t[ix];
      const double y = mesh_->t[iy] - s_;
      Tails t;
      t.first = ix;
      t.last = iy;
      const std::size_t cells = iy - ix;
      std::vector<double> cell(cells);
      double u0 = log_F_plus_G(f, b, x, y, ix);
      for (std::size_t m = 0; m < cells; ++m) {
        const double u1 = log_F_plus_G(f, b, x, y, ix + m + 1);
        cell[m] = mesh_->log_half_dt[ix + m] + log_add(u0, u1);
        u0 = u1;
      }
      t.lower.assign(cells + 1, kNegInf);
      t.upper.assign(cells + 1, kNegInf);
      for (std::size_t m = 0; m < cells; ++m) t.lower[m + 1] = log_add(t.lower[m], cell[m]);
      for (std::size_t m = cells; m-- > 0;) t.upper[m] = log_add(t.upper[m + 1], cell[m]);
      t.total = t.lower[cells];
      tails_.emplace(std::make_pair(ix, iy), std::move(t));
    }
  }
}

double PolymerWindow::log_F_plus_G(const ForwardProfile& f, const BackwardProfile& b, double x, double y,
                                   std::size_t node) const {
  const auto& c = sample_->constants();
  const double fv = f.at(k_ + 1, node) - y_next_[node] + c.C1 * x;
  const double gv = b.at(k_, node) + y_next_[node] - c.C1 * y - c.C2;
  return fv + gv;
}

const ForwardProfile& PolymerWindow::forward(double x) const {
  const auto it = fwd_.find(mesh_->index_of(x));
  if (it == fwd_.end()) throw RangeError("x = " + std::to_string(x) + " is not a start point of this window");
  return it->second;
}

const BackwardProfile& PolymerWindow::backward(double y) const {
  const auto it = bwd_.find(mesh_->index_of(s_ + y));
  if (it == bwd_.end()) throw RangeError("y = " + std::to_string(y) + " is not an end point of this window");
  return it->second;
}

const PolymerWindow::Tails& PolymerWindow::tails(double x, double y) const {
  const auto it = tails_.find({mesh_->index_of(x), mesh_->index_of(s_ + y)});
  if (it == tails_.end()) throw RangeError("no marginal for this (x, y) in the window");
  return it->second;
}

std::size_t PolymerWindow::node_z(double z) const { return mesh_->index_of(s_ + z); }

double PolymerWindow::F(double x, double z) const {
  const std::size_t i = node_z(z);
  return forward(x).at(k_ + 1, i) - y_next_[i] + sample_->constants().C1 * x;
}

double PolymerWindow::G(double z, double y) const {
  const std::size_t i = node_z(z);
  const auto& c = sample_->constants();
  return backward(y).at(k_, i) + y_next_[i] - c.C1 * y - c.C2;
}

double PolymerWindow::X_path(double z, double y) const {
  return backward(y).at(k_, node_z(z)) - sample_->constants().C1 * (y - z);
}

double PolymerWindow::Y_path(double x, double y) const { return forward(x).at(1, node_z(y)); }

double PolymerWindow::H_mu(double x, double y) const { return tails(x, y).total; }

double PolymerWindow::H_direct(double x, double y) const {
  const auto& c = sample_->constants();
  return forward(x).at(1, node_z(y)) - c.C1 * (y - x) - c.C2;
}

double PolymerWindow::log_A(double x, double y, double z) const {
  const Tails& t = tails(x, y);
  const std::size_t i = node_z(z);
  if (i <= t.first) return 0.0;
  if (i >= t.last) return kNegInf;
  return t.upper[i - t.first] - t.total;
}

double PolymerWindow::log_B(double x, double y, double z) const {
  const Tails& t = tails(x, y);
  const std::size_t i = node_z(z);
  if (i <= t.first) return kNegInf;
  if (i >= t.last) return 0.0;
  return t.lower[i - t.first] - t.total;
}

PolymerMarginal PolymerWindow::marginal(double x, double y) const {
  const Tails& t = tails(x, y);
  const auto& f = forward(x);
  const auto& b = backward(y);
  PolymerMarginal m;
  m.k = k_;
  m.x = x;
  m.y = y;
  m.h_mu = t.total;
  m.h_direct = H_direct(x, y);
  m.normalization_error = std::abs(std::expm1(m.h_mu - m.h_direct));
  for (std::size_t i = t.first; i <= t.last; ++i) {
    m.z.push_back(mesh_->t[i] - s_);
    m.log_density.push_back(log_F_plus_G(f, b, x, y, i) - t.total);
    m.log_lower.push_back(t.lower[i - t.first] - t.total);
    m.log_upper.push_back(t.upper[i - t.first] - t.total);
  }
  return m;
}

PolymerMarginal polymer_marginal(const OYSample& s, int k, double x, double y) {
  const PolymerWindow w(s, k, {x}, {y});
  PolymerMarginal m = w.marginal(x, y);
  if (m.normalization_error > 1e-2)
    throw NumericalError("polymer marginal mass is off by " + std::to_string(m.normalization_error) +
                         " (H_mu = " + std::to_string(m.h_mu) + ", H = " + std::to_string(m.h_direct) +
                         "); refine the grid");
  return m;
}

double QuantileSlacks::min() const { return std::min({ff_a, ff_b, gg_a, gg_b, hh_b0, hh_a0}); }

QuantileSlacks busemann_quantile_bounds(const PolymerWindow& w, const QuantileDesign& d) {
  if (!(d.x2 >= d.x1) || !(d.y2 >= d.y1)) throw ConfigError("design needs x1 <= x2 and y1 <= y2");
  QuantileSlacks q;
  const double f_diff = w.F(d.x2, d.z) - w.F(d.x1, d.z);
  const double hx_diff = w.H_mu(d.x2, d.y1) - w.H_mu(d.x1, d.y1);
  q.ff_a = hx_diff - w.log_A(d.x1, d.y1, d.z) - f_diff;
  q.ff_b = f_diff - (hx_diff + w.log_B(d.x2, d.y1, d.z));

  const double x = d.x1;
  const double g_diff = w.G(d.z, d.y2) - w.G(d.z, d.y1);
  const double hy_diff = w.H_mu(x, d.y2) - w.H_mu(x, d.y1);
  q.gg_a = hy_diff - w.log_A(x, d.y1, d.z) - g_diff;
  q.gg_b = g_diff - (hy_diff + w.log_B(x, d.y2, d.z));

  // -log(1 - B) and log(1 - A) read as -log A and log B.
  const double x_diff = w.X_path(d.z, d.y2) - w.X_path(d.z, d.y1);
  q.hh_b0 = -w.log_A(x, d.y1, d.z) - (x_diff - hy_diff);
  q.hh_a0 = (x_diff - hy_diff) - w.log_B(x, d.y2, d.z);
  return q;
}

QuantileSlacks busemann_quantile_bounds(const OYSample& s, const QuantileDesign& d) {
  const PolymerWindow w(s, d.k, {d.x1, d.x2}, {d.y1, d.y2}, {d.z});
  return busemann_quantile_bounds(w, d);
}

}  // namespace polylab
