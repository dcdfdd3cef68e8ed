// SPDX-License-Identifier: Apache-2.0
#include "polylab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "polylab/error.hpp"
#include "polylab/rng.hpp"

namespace polylab {

Environment::Environment(int curves, double left, double step, std::size_t points,
                         std::vector<double> samples, std::vector<double> log_exponents)
    : n_(curves), left_(left), step_(step), points_(points), data_(std::move(samples)),
      alpha_(std::move(log_exponents)) {
  if (n_ < 1) throw ConfigError("environment needs at least one curve");
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw ConfigError("grid step must be positive");
  if (points_ < 2) throw ConfigError("environment needs at least two grid points");
  if (data_.size() != static_cast<std::size_t>(n_) * points_)
    throw ConfigError("sample matrix has the wrong size");
  if (alpha_.empty()) alpha_.assign(static_cast<std::size_t>(n_), 0.0);
  if (alpha_.size() != static_cast<std::size_t>(n_))
    throw ConfigError("one log exponent per curve expected");
  for (double v : data_)
    if (!std::isfinite(v)) throw DataError("non-finite sample in environment");
  right_ = left_ + static_cast<double>(points_ - 1) * step_;
}

std::span<const double> Environment::curve(int level) const {
  if (level < 1 || level > n_) throw RangeError("curve level " + std::to_string(level) + " out of range");
  return {data_.data() + index(level, 0), points_};
}

bool Environment::singular() const {
  return std::any_of(alpha_.begin(), alpha_.end(), [](double a) { return a != 0.0; });
}

bool Environment::normalized_at_origin() const {
  if (singular()) return false;
  for (int i = 1; i <= n_; ++i)
    if (sample(i, 0) != 0.0) return false;
  return true;
}

bool Environment::contains(double t) const {
  const double slack = 1e-9 * step_;
  return t >= left_ - slack && t <= right_ + slack;
}

std::ptrdiff_t Environment::grid_index(double t) const {
  const double u = (t - left_) / step_;
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9 || r < 0.0 || r > static_cast<double>(points_ - 1)) return -1;
  return static_cast<std::ptrdiff_t>(r);
}

std::size_t Environment::nearest_node(double t) const {
  const double u = std::round((t - left_) / step_);
  return static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(points_ - 1)));
}

double Environment::operator()(int level, double t) const {
  if (level < 1 || level > n_) throw RangeError("curve level " + std::to_string(level) + " out of range");
  if (!contains(t)) throw RangeError("time " + std::to_string(t) + " outside the environment domain");
  const std::ptrdiff_t g = grid_index(t);
  const double alpha = log_exponent(level);
  if (g >= 0) {
    if (g == 0 && alpha != 0.0) return alpha > 0 ? -HUGE_VAL : HUGE_VAL;
    return sample(level, static_cast<std::size_t>(g));
  }
  const double u = (t - left_) / step_;
  const auto j = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(points_ - 2)));
  const double frac = u - static_cast<double>(j);
  const double a = sample(level, j);
  const double b = sample(level, j + 1);
  double v = a + frac * (b - a);
  if (j == 0 && alpha != 0.0) v += alpha * std::log(frac);
  return v;
}

std::size_t grid_points(double a, double b, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid step must be positive");
  if (!(b > a)) throw ConfigError("empty domain");
  const double q = (b - a) / h;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q))
    throw ConfigError("grid step does not divide the domain length");
  return static_cast<std::size_t>(r) + 1;
}

Environment build_environment(int n, double a, double b, double h, const CurveFamily& family,
                              bool normalize_left) {
  const std::size_t g = grid_points(a, b, h);
  std::vector<double> data(static_cast<std::size_t>(n) * g);
  for (int i = 1; i <= n; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      const double t = j + 1 == g ? b : a + static_cast<double>(j) * h;
      data[static_cast<std::size_t>(i - 1) * g + j] = family(i, t);
    }
  Environment env(n, a, h, g, std::move(data));
  return normalize_left ? normalize(env) : env;
}

Environment build_environment(int n, double a, double b, double h,
                              const std::vector<std::vector<double>>& samples, bool normalize_left) {
  const std::size_t g = grid_points(a, b, h);
  if (samples.size() != static_cast<std::size_t>(n)) throw ConfigError("expected one sample row per curve");
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(n) * g);
  for (const auto& row : samples) {
    if (row.size() != g) throw ConfigError("sample row length does not match the grid");
    data.insert(data.end(), row.begin(), row.end());
  }
  Environment env(n, a, h, g, std::move(data));
  return normalize_left ? normalize(env) : env;
}

Environment normalize(const Environment& env) {
  if (env.singular()) throw CapabilityError("cannot normalize a curve that is singular at the left endpoint");
  std::vector<double> data = env.data();
  const std::size_t g = env.points();
  for (int i = 0; i < env.curves(); ++i) {
    const double base = data[static_cast<std::size_t>(i) * g];
    for (std::size_t j = 0; j < g; ++j) data[static_cast<std::size_t>(i) * g + j] -= base;
  }
  return Environment(env.curves(), env.left(), env.step(), g, std::move(data));
}

CurveFamily named_family(std::string_view name, int n) {
  if (name == "zero") return [](int, double) { return 0.0; };
  if (name == "linear") return [](int i, double t) { return 0.5 * i * t; };
  if (name == "sin-poly") {
    return [n](int i, double t) {
      const double k = static_cast<double>(i);
      return 0.6 * std::sin(1.3 * k * t + 0.4 * k) + 0.25 * (n - k) * t - 0.15 * t * t +
             0.05 * k * t * t * t;
    };
  }
  throw ConfigError("unknown curve family '" + std::string(name) + "'");
}

CurveFamily random_smooth_family(int n, std::uint64_t seed) {
  const CounterRng rng(seed, 0x736D6F6Fu);
  std::vector<std::array<double, 5>> c(static_cast<std::size_t>(n));
  std::uint64_t draw = 0;
  for (auto& row : c)
    for (double& v : row) v = 2.0 * rng.uniform(draw++) - 1.0;
  return [c](int i, double t) {
    const auto& p = c[static_cast<std::size_t>(i - 1)];
    return p[0] * std::sin((2.0 + 2.0 * p[1]) * t + 3.0 * p[2]) + 1.5 * p[3] * t + 0.7 * p[4] * t * t;
  };
}

Environment reverse_environment(const Environment& env, double z, double* snapped) {
  if (env.singular()) throw CapabilityError("reversal needs curves that are regular at the left endpoint");
  if (!(z > env.left()) || !(z <= env.right()))
    throw RangeError("reversal point " + std::to_string(z) + " must lie in (left, right]");
  const std::size_t jz = env.nearest_node(z);
  if (jz == 0) throw RangeError("reversal point snaps to the left endpoint");
  if (snapped) *snapped = env.node(jz);
  const int n = env.curves();
  const std::size_t g = jz + 1;
  std::vector<double> data(static_cast<std::size_t>(n) * g);
  for (int i = 1; i <= n; ++i) {
    const auto src = env.curve(n + 1 - i);
    for (std::size_t j = 0; j < g; ++j) data[static_cast<std::size_t>(i - 1) * g + j] = -src[jz - j];
  }
  return Environment(n, 0.0, env.step(), g, std::move(data));
}

Environment affine_environment(const Environment& env, const AffineMap& m) {
  if (!(m.a1 > 0.0) || !(m.a2 > 0.0)) throw ConfigError("affine map needs a1 > 0 and a2 > 0");
  const int n = env.curves();
  if (!m.a5.empty() && m.a5.size() != static_cast<std::size_t>(n))
    throw ConfigError("a5 needs one offset per curve");
  const double left = (env.left() - m.a3) / m.a2;
  const double step = env.step() / m.a2;
  const std::size_t g = env.points();
  if (!std::isfinite(left) || !(step > 0.0)) throw ConfigError("affine image has an empty domain");
  std::vector<double> data(static_cast<std::size_t>(n) * g);
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const auto src = env.curve(i);
    const double off = m.a5.empty() ? 0.0 : m.a5[static_cast<std::size_t>(i - 1)];
    for (std::size_t j = 0; j < g; ++j) {
      const double u = left + static_cast<double>(j) * step;
      data[static_cast<std::size_t>(i - 1) * g + j] = m.a1 * src[j] + m.a4 * u + off;
    }
    alpha[static_cast<std::size_t>(i - 1)] = m.a1 * env.log_exponent(i);
  }
  return Environment(n, left, step, g, std::move(data), std::move(alpha));
}

void write_csv(std::ostream& out, const Environment& env) {
  const auto old = out.precision();
  out << "t";
  for (int i = 1; i <= env.curves(); ++i) out << ",f" << i;
  out << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < env.points(); ++j) {
    out << env.node(j);
    for (int i = 1; i <= env.curves(); ++i) out << ',' << env.sample(i, j);
    out << '\n';
  }
  out.precision(old);
}

}  // namespace polylab
