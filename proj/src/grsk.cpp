// SPDX-License-Identifier: Apache-2.0
#include "polylab/grsk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "polylab/error.hpp"
#include "polylab/quadrature.hpp"

namespace polylab {

namespace {

// S(x) = int_0^1 (1 + x u)^a (1 - u) du, the weight of a cell end point when
// the integrand is a power times a linear function.
double power_weight(double a, double x) {
  if (a == 0.0) return 0.5;
  if (std::abs(x) * std::max(std::abs(a), 1.0) <= 0.2) {
    double sum = 0.0;
    double c = 1.0;  // binom(a, m) x^m
    for (int m = 0; m < 60; ++m) {
      const double term = c / ((m + 1.0) * (m + 2.0));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      c *= (a - m) / (m + 1.0) * x;
    }
    return sum;
  }
  const double num = std::expm1((a + 2.0) * std::log1p(x)) - x * (a + 2.0);
  return num / (x * x * (a + 1.0) * (a + 2.0));
}

// In-place T_i on a curve-major sample matrix; i is 0-based here.
//
// With u = t/h the integrand is u^a exp(r) where r is smooth, and the sample
// at node j >= 1 is d_j = a log j + r_j. Every cell integrates u^a times the
// linear interpolant of exp(r); a plain trapezoid would carry an O(1)
// relative error on the first cells that feeds an O(h) error into the next
// transform.
struct CellWeights {
  std::vector<double> left;   // log h + log S(1/j) for the cell (j, j+1)
  std::vector<double> right;  // log h + log S(-1/(j+1))
};

// Weights depend only on the exponent, which repeats across the transforms
// making up W.
using WeightCache = std::map<double, CellWeights>;

const CellWeights& cell_weights(WeightCache& cache, double a, std::size_t points, double h) {
  auto it = cache.find(a);
  if (it != cache.end()) return it->second;
  CellWeights w;
  const double log_h = std::log(h);
  for (std::size_t t = 2; t < points; ++t) {
    const double j = static_cast<double>(t - 1);
    w.left.push_back(log_h + std::log(power_weight(a, 1.0 / j)));
    w.right.push_back(log_h + std::log(power_weight(a, -1.0 / (j + 1.0))));
  }
  return cache.emplace(a, std::move(w)).first->second;
}

void apply_t(std::vector<double>& data, std::vector<double>& alpha, std::size_t points, double h, int i,
             WeightCache& cache) {
  double* fi = data.data() + static_cast<std::size_t>(i) * points;
  double* fj = fi + points;
  const double a = alpha[static_cast<std::size_t>(i + 1)] - alpha[static_cast<std::size_t>(i)];
  if (!(a > -1.0)) throw NumericalError("T transform integrand is not integrable at the origin");

  // Integrand (s/h)^a exp(lin(s)) on the first cell, lin from d0 to d1.
  const double d0 = fj[0] - fi[0];
  double prev = fj[1] - fi[1];
  const double log_h = std::log(h);
  double acc = log_h + log_add(d0 - std::log((a + 1.0) * (a + 2.0)), prev - std::log(a + 2.0));
  const double intercept = d0 + log_h - std::log(a + 1.0);

  fi[0] += intercept;
  fj[0] -= intercept;
  fi[1] += acc;
  fj[1] -= acc;
  const CellWeights& w = cell_weights(cache, a, points, h);
  for (std::size_t t = 2; t < points; ++t) {
    const double d = fj[t] - fi[t];
    acc = log_add(acc, log_add(w.left[t - 2] + prev, w.right[t - 2] + d));
    prev = d;
    fi[t] += acc;
    fj[t] -= acc;
  }
  alpha[static_cast<std::size_t>(i)] += a + 1.0;
  alpha[static_cast<std::size_t>(i + 1)] -= a + 1.0;
}

void check_origin(const Environment& env) {
  if (env.left() != 0.0) throw ConfigError("gRSK transforms act on environments over [0, T)");
}

}  // namespace

Environment t_transform(const Environment& env, int i) {
  check_origin(env);
  if (i < 1 || i >= env.curves()) throw RangeError("T_i needs 1 <= i <= n-1");
  std::vector<double> data = env.data();
  std::vector<double> alpha = env.log_exponents();
  WeightCache cache;
  apply_t(data, alpha, env.points(), env.step(), i - 1, cache);
  return Environment(env.curves(), env.left(), env.step(), env.points(), std::move(data), std::move(alpha));
}

Environment k_transform(const Environment& env, int r) {
  check_origin(env);
  const int n = env.curves();
  if (r < 1 || r >= n) throw RangeError("K_r needs 1 <= r <= n-1");
  std::vector<double> data = env.data();
  std::vector<double> alpha = env.log_exponents();
  WeightCache cache;
  for (int i = n - 1; i >= r; --i) apply_t(data, alpha, env.points(), env.step(), i - 1, cache);
  return Environment(n, env.left(), env.step(), env.points(), std::move(data), std::move(alpha));
}

Environment w_transform(const Environment& env) {
  check_origin(env);
  if (!env.normalized_at_origin()) throw ConfigError("W needs an environment with f_i(0) = 0");
  const int n = env.curves();
  std::vector<double> data = env.data();
  std::vector<double> alpha = env.log_exponents();
  WeightCache cache;
  for (int r = 1; r <= n - 1; ++r)
    for (int i = n - 1; i >= r; --i) apply_t(data, alpha, env.points(), env.step(), i - 1, cache);
  return Environment(n, env.left(), env.step(), env.points(), std::move(data), std::move(alpha));
}

}  // namespace polylab
