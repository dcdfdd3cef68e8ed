// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace polylab {

// f(level, t) with 1-based levels.
using CurveFamily = std::function<double(int, double)>;

/// n curves sampled on a uniform grid over [left, right], linear between
/// grid points.
///
/// Curves produced by the gRSK transforms behave like alpha*log(t - left) at
/// the left endpoint. For those curves `log_exponent(i)` is alpha and the
/// sample at the left node stores the finite intercept, so that on the first
/// cell the curve reads alpha*log((t - left)/h) + (linear interpolation).
class Environment {
 public:
  Environment() = default;
  Environment(int curves, double left, double step, std::size_t points,
              std::vector<double> samples, std::vector<double> log_exponents = {});

  int curves() const { return n_; }
  std::size_t points() const { return points_; }
  double step() const { return step_; }
  double left() const { return left_; }
  double right() const { return right_; }
  double node(std::size_t j) const {
    return j + 1 == points_ ? right_ : left_ + static_cast<double>(j) * step_;
  }

  std::span<const double> curve(int level) const;
  double sample(int level, std::size_t j) const { return data_[index(level, j)]; }
  double log_exponent(int level) const { return alpha_[static_cast<std::size_t>(level - 1)]; }
  bool singular() const;
  bool normalized_at_origin() const;

  bool contains(double t) const;
  // Grid index of t when t is a grid point (within 1e-9 cells), otherwise -1.
  std::ptrdiff_t grid_index(double t) const;
  std::size_t nearest_node(double t) const;

  // Interpolated value; throws RangeError outside the domain.
  double operator()(int level, double t) const;

  const std::vector<double>& data() const { return data_; }
  const std::vector<double>& log_exponents() const { return alpha_; }

 private:
  std::size_t index(int level, std::size_t j) const {
    return static_cast<std::size_t>(level - 1) * points_ + j;
  }

  int n_ = 0;
  double left_ = 0.0;
  double right_ = 0.0;
  double step_ = 1.0;
  std::size_t points_ = 0;
  std::vector<double> data_;
  std::vector<double> alpha_;
};

// Number of grid points for [a, b] with spacing h; ConfigError if h does not
// divide b - a (1e-9 relative tolerance).
std::size_t grid_points(double a, double b, double h);

Environment build_environment(int n, double a, double b, double h, const CurveFamily& family,
                              bool normalize);
// samples[i][j] is curve i+1 at a + j*h.
Environment build_environment(int n, double a, double b, double h,
                              const std::vector<std::vector<double>>& samples, bool normalize);

// Subtracts f_i(left) from every curve.
Environment normalize(const Environment& env);

// Closed-form test families: "zero", "linear", "sin-poly".
CurveFamily named_family(std::string_view name, int n);
// Smooth trigonometric-polynomial curves with coefficients drawn from seed.
CurveFamily random_smooth_family(int n, std::uint64_t seed);

// (R_z f)_i(t) = -f_{n+1-i}(z - t) on [0, z - left]; z is snapped to the
// nearest grid point and the snapped value is written to *snapped.
Environment reverse_environment(const Environment& env, double z, double* snapped = nullptr);

struct AffineMap {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 0.0;
  double a4 = 0.0;
  std::vector<double> a5;  // per curve; empty means zero
};

// g_i(u) = a1 f_i(a2 u + a3) + a4 u + a5_i on the preimage grid.
Environment affine_environment(const Environment& env, const AffineMap& map);

// Header `t,f1,...,fn`, 17 significant digits.
void write_csv(std::ostream& out, const Environment& env);

}  // namespace polylab
