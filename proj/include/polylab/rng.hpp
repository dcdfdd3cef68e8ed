// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace polylab {

std::uint64_t splitmix64(std::uint64_t x);

// Seed of replica r under a master seed.
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t r);

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Stateless counter-based generator: the value of draw d on stream s under
/// seed k is a fixed function of (k, s, d).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

  // Uniform on (0, 1), 53 bits.
  double uniform(std::uint64_t draw) const;
  // Standard normal by Box-Muller; draws 2j and 2j+1 share one block.
  double normal(std::uint64_t draw) const;
  // out[i] = normal(first + i).
  void fill_normal(std::uint64_t first, std::span<double> out) const;

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t index) const;

  std::uint64_t seed_;
  std::uint32_t stream_;
};

}  // namespace polylab
