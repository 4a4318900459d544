#pragma once

#include <cstdint>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/errors.hpp"
#include "bdsep/hitting.hpp"

namespace bdsep {

struct DistributionAtTime {
  std::vector<double> probs;
  double time = 0.0;
  TimeMode mode = TimeMode::Discrete;
};

// k applications of the transition kernel to a point mass at start.
DistributionAtTime evolve_discrete(const BirthDeathChain& chain,
                                   std::int64_t k, int start = 0);

// Continuous semigroup at time t: the Poisson(t) mixture of kernel powers,
// truncated so the discarded mass stays below 1e-12.
DistributionAtTime evolve_continuous(const BirthDeathChain& chain, double t,
                                     int start = 0);

// Shared-evolution variant; cost is one pass to the deepest Poisson window.
std::vector<DistributionAtTime> evolve_continuous_grid(
    const BirthDeathChain& chain, const std::vector<double>& times,
    int start = 0);

// max over states of 1 - probs(x)/nu(x), clamped to [0, 1].
double separation_direct(const DistributionAtTime& dist,
                         const StationaryDistribution& target);

// Half the l1 distance to the stationary law.
double total_variation(const DistributionAtTime& dist,
                       const StationaryDistribution& target);

// Chi-square-style norm: sqrt(sum nu(x) (probs(x)/nu(x) - 1)^2).
double l2_distance(const DistributionAtTime& dist,
                   const StationaryDistribution& target);

}  // namespace bdsep
