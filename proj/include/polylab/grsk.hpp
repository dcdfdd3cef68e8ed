// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polylab/environment.hpp"
#include "polylab/free_energy.hpp"

namespace polylab {

// Adds L(t) = log int_0^t exp(f_{i+1} - f_i) to curve i and subtracts it from
// curve i+1. The first cell is integrated in closed form against the
// log-singularity recorded in the environment.
Environment t_transform(const Environment& env, int i);

// K_r = T_r T_{r+1} ... T_{n-1}; W = K_{n-1} ... K_1 (K_1 applied first).
Environment k_transform(const Environment& env, int r);
Environment w_transform(const Environment& env);

enum class IdentityId {
  greene,
  invariance,
  wf_wrf,
  searrow,
  z_reverse,
  pileup,
  change_of_variables,
  slice_reassembly,
};

std::string_view to_string(IdentityId id);
IdentityId identity_from_string(std::string_view name);
std::vector<IdentityId> all_identities();

/// Parameters read by the residuals; each identity uses the subset noted.
struct IdentityParams {
  int k = 1;                 // greene, wf-wrf, searrow, pileup, slice-reassembly
  double t = 1.0;            // greene
  double x = 0.25;           // wf-wrf, searrow, pileup, change-of-variables, slice-reassembly
  double y = 0.75;           // searrow, pileup, change-of-variables, slice-reassembly
  double z = 0.8;            // wf-wrf, z-reverse
  std::vector<double> xs{0.2, 0.3};  // invariance starts; z-reverse starts
  std::vector<double> ys{0.6, 0.75}; // invariance ends; z-reverse ends
  std::vector<int> ls;       // z-reverse start levels (default: n for every path)
  std::vector<int> ms;       // z-reverse end levels (default: 1 for every path)
  int l = 0;                 // change-of-variables / slice-reassembly top level (0 = n)
  int m = 1;
  Beta beta = Beta{1.0};     // change-of-variables
  AffineMap affine{1.3, 0.8, 0.1, 0.4, {}};  // change-of-variables
  MultiOptions multi;
};

// |LHS - RHS| of the named identity on env.
double identity_residual(const Environment& env, IdentityId id, const IdentityParams& params);

}  // namespace polylab
