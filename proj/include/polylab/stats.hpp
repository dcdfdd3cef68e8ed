// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polylab/oy_polymer.hpp"
#include "polylab/parallel.hpp"

namespace polylab {

// rows[r] = fn(r, replica_seed(master, r)) for r < count. Rows do not depend on
// the thread count or completion order. A throwing replica aborts the run
// with a DataError naming the lowest failing index.
std::vector<std::vector<double>> map_replicas(
    std::size_t count, std::uint64_t master,
    const std::function<std::vector<double>(std::uint64_t replica, std::uint64_t seed)>& fn,
    Execution execution = Execution::parallel);

/// One scalar quantity of the polymer, evaluated on independent samples.
struct ReplicaSpec {
  std::string quantity;      // see replica_quantities()
  std::vector<double> args;
  std::size_t replicas = 1;
  std::uint64_t master_seed = 1;
  int n = 8;
  double T = 2.0;
  double h = 1.0 / 256.0;
  double l_max = 0.0;        // 0: default_l_max for the largest |arg|

  nlohmann::json to_json() const;
};

struct SampleTable {
  std::vector<std::uint64_t> replica;
  std::vector<double> value;
};

// Quantity names and their argument lists.
std::vector<std::pair<std::string, std::string>> replica_quantities();
double evaluate_quantity(const OYSample& s, const std::string& quantity, std::span<const double> args);
SampleTable run_replicas(const ReplicaSpec& spec, Execution execution = Execution::parallel);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);
// Asymptotic Kolmogorov tail with the small-sample correction of the
// effective size n1 n2 / (n1 + n2).
double kolmogorov_p_value(double statistic, std::size_t n1, std::size_t n2);

enum class DistCheck { sheet_shift, f_downright, wrz_law };

std::string to_string(DistCheck c);
DistCheck dist_check_from_string(const std::string& name);

struct DistParams {
  int n = 8;
  double T = 2.0;
  int k = 2;
  double x = 0.5;   // sheet-shift and f-downright
  double y = 0.5;   // sheet-shift
  double z = -1.0;  // f-downright; wrz-law reverses at s + z
  double t = 1.0;   // wrz-law evaluation time
  double h = 1.0 / 256.0;
  std::size_t replicas = 2000;
  std::uint64_t seed = 20240601;
};

struct DistReport {
  std::string check;
  int n = 0;
  double T = 0.0;
  int k = 0;
  std::size_t N = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Both samples come from the same replicas (paired), so a check whose two
// sides coincide reports a statistic of exactly zero.
DistReport distributional_check(DistCheck which, const DistParams& params,
                                Execution execution = Execution::parallel);

}  // namespace polylab
