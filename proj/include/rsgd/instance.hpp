#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsgd/sparse.hpp"

namespace rsgd {

// Label 1 means "relevant", 0 means "irrelevant".
enum class LabelSource { crowd, expert };

struct Instance {
  std::string id;
  SparseVector features;
  std::optional<int> crowd_label;   // noisy aggregated label
  std::optional<int> expert_label;  // ground-truth label
  std::string raw_text;             // provenance only, may be empty
};

// Returns the requested label; throws std::invalid_argument if absent.
int label_of(const Instance& inst, LabelSource source);

// The (crowd, unlabeled, reward, eval) quadruple a training run consumes.
// `reward` instances are drawn from `crowd` (same ids); `eval` ids are
// disjoint from everything else and never trained on.
struct DatasetBundle {
  std::vector<Instance> crowd;
  std::vector<Instance> unlabeled;
  std::vector<Instance> reward;
  std::vector<Instance> eval;
};

// Checks bundle invariants. When `require_reward` is set the reward set
// must have >= 2 instances covering both classes (the pairwise reward
// loss needs at least one of each). Throws std::invalid_argument.
void validate_bundle(const DatasetBundle& bundle, bool require_reward);

struct SplitSpec {
  double expert_ratio = 0.1;                 // fraction of crowd forming the reward set
  std::optional<double> imbalance_target;    // optional resampling target
  std::uint64_t seed = 0;
  // Whether reward members' crowd labels are replaced by their expert
  // labels in the returned crowd list.
  bool merge_expert_into_crowd = false;
};

// Evaluation-only side channel holding true labels of unlabeled instances.
// Never consumed by the trainer.
struct TruthOracle {
  std::map<std::string, int> labels;
};

}  // namespace rsgd
