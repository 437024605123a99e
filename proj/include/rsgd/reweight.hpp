#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsgd/losses.hpp"
#include "rsgd/model.hpp"

namespace rsgd {

// Per-batch instance weights over the concatenated labeled+unlabeled batch
// (first n labeled, last m unlabeled). After rectification every entry is
// non-negative; after normalization entries sum to 1 or are all zero.
struct WeightVector {
  std::vector<double> values;
  std::vector<double> raw;  // pre-rectification inner products, diagnostics
};

enum class WeightMode { meta, uniform };

struct MetaStepConfig {
  double learning_rate = 0.05;      // inner descent step size
  double unsup_weight = 1.0;        // trade-off on the unsupervised sum
  std::uint32_t reward_batch_size = 8;
  RewardLossConfig reward_loss;
  PseudoLabelConfig pseudo;
  WeightMode weight_mode = WeightMode::meta;
};

// raw_i = dot(reward_grad, labeled_grads[i]);
// raw_{n+j} = unsup_weight * dot(reward_grad, unsup_grads[j]).
// All gradients must be evaluated at the same parameters. The positive
// step-size prefactors of the first-order weight formula are dropped:
// rectification preserves sign and normalization cancels positive scales.
std::vector<double> meta_raw_weights(
    const ParamVector& reward_grad,
    const std::vector<ParamVector>& labeled_grads,
    const std::vector<ParamVector>& unsup_grads, double unsup_weight);

// Elementwise max(raw, 0).
std::vector<double> rectify(const std::vector<double>& raw);

// w_i / (sum + sigma) with sigma = 1 iff the sum is zero, so an all-zero
// input stays all-zero. Negative entries are rejected (rectify first).
std::vector<double> normalize(const std::vector<double>& nonneg);

struct MetaDiagnostics {
  double reward_loss_before = 0.0;  // NaN when no reward batch was given
  double reward_loss_after = 0.0;
  std::size_t zero_weight_labeled = 0;
  std::vector<std::string> zero_weight_ids;  // labeled instances only
};

struct MetaStepResult {
  ParamVector params;  // updated parameters
  WeightVector weights;
  MetaDiagnostics diag;
};

// One step of the bi-level procedure: pseudo-label the unlabeled batch at
// the current parameters, take all per-sample gradients there, derive
// rectified normalized weights from the reward gradient, then apply the
// weighted descent update. With WeightMode::uniform the weights are fixed
// at 1/n and 1/m and no reward batch is required.
MetaStepResult meta_step(const ModelSpec& spec, const ParamVector& params,
                         const Batch& labeled, const Batch& unlabeled,
                         const Batch& reward, const MetaStepConfig& config);

}  // namespace rsgd
