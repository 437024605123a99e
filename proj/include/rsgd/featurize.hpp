#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "rsgd/instance.hpp"

namespace rsgd {

// Token n-gram hashing into a power-of-two number of buckets.
// The hash is FNV-1a 64 over the n-gram bytes followed by the splitmix64
// finalizer; bucket = hash & (dimension - 1), sign = top hash bit.
struct HashFeaturizerConfig {
  std::uint32_t dimension = 1u << 14;
  std::uint32_t ngram_min = 1;
  std::uint32_t ngram_max = 2;
  bool lowercase = true;
  bool signed_hashing = true;

  void validate() const;  // throws std::invalid_argument
};

struct HashedFeatures {
  SparseVector features;  // L2-normalized unless empty
  bool empty_input = false;
};

HashedFeatures hash_features(std::string_view text,
                             const HashFeaturizerConfig& config);

// Synthetic benchmark generator: two class-conditional unit Gaussians
// separated by `class_separation` along a random unit direction. Crowd
// labels are true labels flipped independently at `noise_ratio`; true
// labels of unlabeled instances go into the evaluation-only oracle.
// Optional per-class flip rates model crowd noise that hits one class
// harder (the usual case when annotators over-report the minority class);
// when unset, both classes flip at the single symmetric rate.
struct SynthConfig {
  std::uint32_t n_pos = 1000;
  std::uint32_t n_neg = 2000;
  std::uint32_t n_unlabeled_pos = 1000;
  std::uint32_t n_unlabeled_neg = 10000;
  std::uint32_t n_eval_pos = 500;
  std::uint32_t n_eval_neg = 1000;
  std::uint32_t dim = 50;
  double class_separation = 2.0;
  double noise_ratio = 0.2;
  std::optional<double> noise_ratio_pos;  // rate for true positives
  std::optional<double> noise_ratio_neg;  // rate for true negatives
  double expert_ratio = 0.1;  // reward split applied to the generated crowd set
  bool merge_expert_into_crowd = false;
  std::uint64_t seed = 1;

  double flip_rate(int true_label) const {
    return true_label == 1 ? noise_ratio_pos.value_or(noise_ratio)
                           : noise_ratio_neg.value_or(noise_ratio);
  }

  void validate() const;  // throws std::invalid_argument
};

struct SynthSummary {
  double empirical_noise_ratio = 0.0;  // fraction of crowd labels flipped
  double crowd_imbalance = 0.0;
  double unlabeled_imbalance = 0.0;
  double reward_imbalance = 0.0;
};

struct SynthResult {
  DatasetBundle bundle;
  TruthOracle truth;  // true labels of the unlabeled pool
  SynthSummary summary;
};

SynthResult synth_generate(const SynthConfig& config);

}  // namespace rsgd
