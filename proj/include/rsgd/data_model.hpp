#pragma once

#include <cstdint>
#include <vector>

#include "rsgd/instance.hpp"

namespace rsgd {

// Negatives over positives under the chosen label source.
// Throws std::domain_error when there are no positives (the ratio is
// undefined, never infinity).
double imbalance_ratio(const std::vector<Instance>& instances,
                       LabelSource source);

struct RewardSplit {
  std::vector<Instance> crowd;   // full input list, crowd labels intact
  std::vector<Instance> reward;  // stratified sample carrying expert labels
};

// Draws round(expert_ratio * N) instances without replacement, stratified
// by expert label with largest-remainder apportionment so the reward
// imbalance ratio tracks the crowd ratio within rounding. Every input
// instance must carry both labels.
RewardSplit split_reward(const std::vector<Instance>& crowd_with_expert,
                         const SplitSpec& spec);

// Keeps all negatives and floor(N_neg / target) randomly chosen positives
// (labels read from `source`). The target must not be below the current
// ratio; instance payloads are never altered, only membership.
std::vector<Instance> subsample_to_imbalance(
    const std::vector<Instance>& instances, double target,
    std::uint64_t seed, LabelSource source = LabelSource::expert);

}  // namespace rsgd
