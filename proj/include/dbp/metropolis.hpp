#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dbp {

struct ChainConfig {
  long steps = 50000;
  long burn_in = 5000;
  double proposal_scale = 1.0;
  std::uint64_t seed = 1;
};

struct Chain {
  // draws[i] is the state after step burn_in + i; size steps - burn_in.
  std::vector<std::vector<double>> draws;
  double acceptance_rate = 0.0;  // over the post-burn-in phase
  double tuned_scale = 0.0;
};

// Random-walk Metropolis with a spherical Gaussian proposal. The scale is
// adapted toward a 20-50% acceptance rate during burn-in and frozen
// afterwards. Identical seed and config give bit-identical chains. A NaN
// from log_target is a hard error naming the offending point.
Chain rw_metropolis(
    const std::function<double(std::span<const double>)>& log_target,
    std::vector<double> init, const ChainConfig& cfg);

}  // namespace dbp
