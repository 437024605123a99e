#pragma once

#include <vector>

#include "rsgd/instance.hpp"
#include "rsgd/model.hpp"

namespace rsgd {

// Batches reference instances owned by the dataset.
using Batch = std::vector<const Instance*>;

enum class ScoreKind { logit, prob };

// Reward-set loss: ce_mix * mean-CE + (1 - ce_mix) * pairwise squared
// ranking surrogate over all (negative, positive) pairs.
struct RewardLossConfig {
  double ce_mix = 0.5;
  ScoreKind score_kind = ScoreKind::logit;

  void validate() const;  // throws std::invalid_argument
};

struct PseudoLabelConfig {
  double confidence_threshold = 0.95;  // in [0.5, 1]

  void validate() const;  // throws std::invalid_argument
};

// sum_i w_i * sup_i + unsup_weight * sum_j w_{n+j} * unsup_j, where the
// first n weights align with the supervised losses.
double training_loss(const std::vector<double>& sup_losses,
                     const std::vector<double>& unsup_losses,
                     const std::vector<double>& weights, double unsup_weight);

struct PseudoLabel {
  int label = 0;          // 1 iff prob >= 0.5 (tie broken toward positive)
  bool confident = false; // max(p, 1-p) >= threshold
};

PseudoLabel pseudo_label(const ModelSpec& spec, const ParamVector& params,
                         const SparseVector& x,
                         const PseudoLabelConfig& config);

// Cross-entropy against the pseudo-label when confident; zero loss and a
// zero gradient otherwise. No gradient flows through the label itself.
LossGrad unsup_loss_grad(const ModelSpec& spec, const ParamVector& params,
                         const SparseVector& x, const PseudoLabel& pl);

// Non-parametric AUC: mean over (positive, negative) pairs of
// 1[s_p > s_n] with ties credited 0.5. Throws std::domain_error on
// single-class input.
double auc_estimate(const std::vector<double>& scores,
                    const std::vector<int>& labels);

// mean over pairs of f(phi(x_neg) - phi(x_pos)) with f(s) = (1 + s)^2;
// phi is the logit or the probability depending on score_kind.
LossGrad auc_surrogate_grad(const ModelSpec& spec, const ParamVector& params,
                            const Batch& pos, const Batch& neg,
                            ScoreKind score_kind);

// Reward batch must contain both classes under expert labels.
LossGrad reward_loss_grad(const ModelSpec& spec, const ParamVector& params,
                          const Batch& reward_batch,
                          const RewardLossConfig& config);

// Loss-only variant (no gradient allocation).
double reward_loss(const ModelSpec& spec, const ParamVector& params,
                   const Batch& reward_batch, const RewardLossConfig& config);

}  // namespace rsgd
