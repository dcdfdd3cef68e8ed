// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "polylab/oy_polymer.hpp"

namespace polylab {

/// Constants of the height T^{1/3} / space T^{2/3} rescaling.
struct ScaledQuery {
  double T = 1.0;
  double height = 1.0;  // 2^{1/3} T^{-1/3}
  double space = 1.0;   // 2^{1/3} T^{2/3}
  double shift = 1.0;   // space / 24
  double beta = 1.0;    // (T/2)^{1/3}, the inverse temperature of the scaled line

  static ScaledQuery make(double T);
};

double rescale_sheet(const OYSample& s, const ScaledQuery& q, double x, double y);
double rescale_line(const OYSample& s, const ScaledQuery& q, int i, double x);
// Inverse of the height map: H from a rescaled sheet value.
double unscale_height(const ScaledQuery& q, double value);

// r_k(x, z) = height * F_k(space x, space z) - 2^{3/2} k^{1/2} x^{1/2} - 2 z x.
double frak_r(const OYSample& s, const ScaledQuery& q, int k, double x, double z);
// R_k(x, z) = F_k(x, z) - k log x - z x / T + log k!.
double remainder_r(const OYSample& s, int k, double x, double z);

struct ConcaveGap {
  double gap = 0.0;
  double floor = 0.0;
};

// gap = k (u - 1 - log u) with u = x / x_bar, floor = k (x - x_bar)^2 / D with
// D = 2 eps^{-4} on the box [eps, 1/eps].
ConcaveGap kconcave_gap(int k, double T, double x, double x_bar, double eps);
double quadratic_constant(double eps);

/// The scaled line ensemble as an environment, with inverse temperature
/// beta, evaluated on the image of a polymer window's mesh so that its sums
/// match the unscaled ones term by term.
class ScaledLineWindow {
 public:
  ScaledLineWindow(const PolymerWindow& w, const ScaledQuery& q, const std::vector<double>& ys);
  // Scaled-line free energy from (z, k) to (y, 1) at inverse temperature beta.
  double free_energy(double z, double y) const;

 private:
  int k_;
  Environment env_;
  std::shared_ptr<const Mesh> mesh_;
  std::map<std::size_t, BackwardProfile> bwd_;
};

// Rescaled quantile bound at zbar = -2^{-1/2} k^{1/2} x_bar^{-1/2}: the A form
// when x_bar >= x, the B form otherwise. Arguments are on the rescaled axis.
double airy_quantile_slack(const PolymerWindow& w, const ScaledQuery& q, double x, double x_bar, double y);
double airy_quantile_zbar(int k, double x_bar);

struct AirySheetSlacks {
  double b = 0.0;  // lower bound through log(1 - B)
  double a = 0.0;  // upper bound through -log(1 - A)
};

AirySheetSlacks airy_sheet_slacks(const PolymerWindow& w, const ScaledLineWindow& line, const ScaledQuery& q,
                                  double x, double y1, double y2, double z);

// Quantile decay at zbar = -k T / x_bar: log A bound when x_bar >= x, log B
// bound otherwise, with D = 2 eps^{-4}.
double quantile_decay_slack(const PolymerWindow& w, double x, double x_bar, double y, double eps);

// Largest k <= n-1 with -k T / x > -sqrt(nT) + h; 0 when none.
int admissible_k_max(int n, double T, double x, double h);

struct BusemannRow {
  std::uint64_t replica = 0;
  int k = 0;
  double delta = 0.0;   // X[(z_k,k)->(y2,1)] - X[(z_k,k)->(y1,1)]
  double target = 0.0;  // H(x, y2) - H(x, y1)
  double lower = 0.0;   // target + log B(x, y2; z_k)
  double upper = 0.0;   // target - log A(x, y1; z_k)
  double log_a = 0.0;   // log A(x, y1; z_k)
  double log_b = 0.0;   // log B(x, y2; z_k)
};

// One row per k = 1..k_max along the ray z_k = -k T / x.
std::vector<BusemannRow> busemann_ray_experiment(const OYSample& s, double x, double y1, double y2, int k_max,
                                                 std::uint64_t replica = 0);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

}  // namespace polylab
