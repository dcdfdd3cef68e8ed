// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/free_energy.hpp"

namespace polylab {

/// Centering constants of the semi-discrete polymer at size n and time T.
struct ScalingConstants {
  int n = 1;
  double T = 1.0;
  double s = 1.0;   // sqrt(n T), the time at which level 1 is read
  double C1 = 0.0;
  double C2 = 0.0;
  std::vector<double> C3;  // C3[i-1] for levels 1..n+1

  static ScalingConstants make(int n, double T);
  double c3(int level) const { return C3.at(static_cast<std::size_t>(level - 1)); }
};

// n independent Brownian curves on [0, length] started at 0: Gaussian
// increments at the grid points from CounterRng(seed, curve), linear between.
Environment brownian_environment(int n, double length, double h, std::uint64_t seed);

/// One realization of n independent Brownian curves on [0, L] and, on
/// demand, their image under W.
class OYSample {
 public:
  OYSample(std::uint64_t seed, int n, double T, double l_max, double h);

  std::uint64_t seed() const { return seed_; }
  int n() const { return constants_.n; }
  double T() const { return constants_.T; }
  double step() const { return brownian_.step(); }
  const ScalingConstants& constants() const { return constants_; }
  const Environment& brownian() const { return brownian_; }
  // Computed on first use; safe to call from several threads.
  const Environment& Y() const;

 private:
  struct Lazy;
  std::uint64_t seed_;
  ScalingConstants constants_;
  Environment brownian_;
  std::shared_ptr<Lazy> lazy_;
};

// L_max is rounded up to a whole number of steps.
OYSample sample_brownian_field(int n, double T, double l_max, double h, std::uint64_t seed);

// Right cutoff that fits every endpoint up to |y| <= y_abs_max plus a margin.
double default_l_max(int n, double T, double y_abs_max);

// X_i(x) = Y_i(s + x) - C1 x - C2 - C3_i.
double kpz_line_prelimit(const OYSample& s, int i, double x);

enum class SheetForm { y_form, b_form };

// H(x, y) = f[(x, n) -> (s + y, 1)] - C1 (y - x) - C2 with f = Y (default) or
// f = B. At x = 0 the Y form reads X_1(y) since Y is singular at the origin.
double kpz_sheet_prelimit(const OYSample& s, double x, double y, SheetForm form = SheetForm::y_form);

// F_k(x, z) = Y[(x, n) -> (s + z, k + 1)] - Y_{k+1}(s + z) + C1 x.
double f_field(const OYSample& s, int k, double x, double z);
// G_k(z, y) = Y[(s + z, k) -> (s + y, 1)] + Y_{k+1}(s + z) - C1 y - C2.
double g_field(const OYSample& s, int k, double z, double y);

// X[(z - x, 1) down/right (z, k + 1)] on the line ensemble.
double line_down_right(const OYSample& s, int k, double x, double z);
// (W R_{s+z} B)[(s + z - x, 1) down/right (s + z, k + 1)], with the reversed
// field shifted to start at zero.
double reversed_down_right(const OYSample& s, int k, double x, double z);
// (W R_{zp} B)_level(t) for the same shifted reversal.
double reversed_w_value(const OYSample& s, double zp, int level, double t);

/// Density and tails of the level-crossing location z.
struct PolymerMarginal {
  int k = 1;
  double x = 0.0;
  double y = 0.0;
  std::vector<double> z;
  std::vector<double> log_density;  // F + G - H_mu
  std::vector<double> log_lower;    // log B(z) = log mu(-inf, z]
  std::vector<double> log_upper;    // log A(z) = log mu[z, inf)
  double h_mu = 0.0;      // log of the trapezoid sum of exp(F + G)
  double h_direct = 0.0;  // H from the single sweep
  // |exp(h_mu - h_direct) - 1|: total mass of the density normalized by H.
  double normalization_error = 0.0;
};

/// Every field needed by the quantile inequalities, evaluated on one mesh
/// that contains all starting points xs, all s + ys and all s + zs, so that
/// the discrete sums obey the same inequalities as the integrals.
class PolymerWindow {
 public:
  PolymerWindow(const OYSample& s, int k, std::vector<double> xs, std::vector<double> ys,
                std::vector<double> zs = {});

  int k() const { return k_; }
  const Mesh& mesh() const { return *mesh_; }
  const OYSample& sample() const { return *sample_; }

  double F(double x, double z) const;
  double G(double z, double y) const;
  // X[(z, k) -> (y, 1)] from the same backward sweep as G.
  double X_path(double z, double y) const;
  // Y[(x, n) -> (s + y, 1)] for any y on the mesh.
  double Y_path(double x, double y) const;
  // log of the trapezoid sum of exp(F + G) over the support.
  double H_mu(double x, double y) const;
  double H_direct(double x, double y) const;
  double log_A(double x, double y, double z) const;
  double log_B(double x, double y, double z) const;
  PolymerMarginal marginal(double x, double y) const;

 private:
  struct Tails {
    std::size_t first = 0;        // node of s + z = x
    std::size_t last = 0;         // node of s + y
    double total = kNegInf;
    std::vector<double> lower;    // indexed by node - first
    std::vector<double> upper;
  };
  const ForwardProfile& forward(double x) const;
  const BackwardProfile& backward(double y) const;
  const Tails& tails(double x, double y) const;
  std::size_t node_z(double z) const;
  double log_F_plus_G(const ForwardProfile& f, const BackwardProfile& b, double x, double y,
                      std::size_t node) const;

  const OYSample* sample_;
  int k_;
  double s_;
  std::shared_ptr<const Mesh> mesh_;  // profiles keep a pointer to it
  std::vector<double> y_next_;         // Y_{k+1} on the mesh
  std::map<std::size_t, ForwardProfile> fwd_;   // keyed by the node of x
  std::map<std::size_t, BackwardProfile> bwd_;  // keyed by the node of s + y
  std::map<std::pair<std::size_t, std::size_t>, Tails> tails_;
};

PolymerMarginal polymer_marginal(const OYSample& s, int k, double x, double y);

/// Signed slacks (right side minus left side) of the six quantile
/// inequalities at one design point; +inf when a tail is zero.
struct QuantileSlacks {
  double ff_a = 0.0;
  double ff_b = 0.0;
  double gg_a = 0.0;
  double gg_b = 0.0;
  double hh_b0 = 0.0;
  double hh_a0 = 0.0;
  double min() const;
};

struct QuantileDesign {
  int k = 1;
  double x1 = 0.5;
  double x2 = 1.0;
  double y1 = 0.0;
  double y2 = 0.5;
  double z = -1.0;
};

QuantileSlacks busemann_quantile_bounds(const PolymerWindow& w, const QuantileDesign& d);
QuantileSlacks busemann_quantile_bounds(const OYSample& s, const QuantileDesign& d);

}  // namespace polylab
