#include "rsgd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsgd/data_model.hpp"

namespace rsgd {

void RewardLossConfig::validate() const {
  if (!(ce_mix >= 0.0) || ce_mix > 1.0) {
    throw std::invalid_argument("ce_mix must lie in [0, 1]");
  }
}

void PseudoLabelConfig::validate() const {
  if (!(confidence_threshold >= 0.5) || confidence_threshold > 1.0) {
    throw std::invalid_argument(
        "confidence_threshold must lie in [0.5, 1]");
  }
}

double training_loss(const std::vector<double>& sup_losses,
                     const std::vector<double>& unsup_losses,
                     const std::vector<double>& weights, double unsup_weight) {
  const std::size_t n = sup_losses.size(), m = unsup_losses.size();
  if (weights.size() != n + m) {
    throw std::invalid_argument(
        "weight vector length " + std::to_string(weights.size()) +
        " does not match n + m = " + std::to_string(n + m));
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup += weights[i] * sup_losses[i];
  double unsup = 0.0;
  for (std::size_t j = 0; j < m; ++j) unsup += weights[n + j] * unsup_losses[j];
  return sup + unsup_weight * unsup;
}

PseudoLabel pseudo_label(const ModelSpec& spec, const ParamVector& params,
                         const SparseVector& x,
                         const PseudoLabelConfig& config) {
  config.validate();
  const double p = forward(spec, params, x).prob;
  PseudoLabel out;
  out.label = p >= 0.5 ? 1 : 0;
  out.confident = std::max(p, 1.0 - p) >= config.confidence_threshold;
  return out;
}

LossGrad unsup_loss_grad(const ModelSpec& spec, const ParamVector& params,
                         const SparseVector& x, const PseudoLabel& pl) {
  if (!pl.confident) {
    return LossGrad{0.0, zero_params(spec)};
  }
  return ce_grad(spec, params, x, pl.label);
}

double auc_estimate(const std::vector<double>& scores,
                    const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("scores/labels length mismatch");
  }
  std::size_t n_pos = 0, n_neg = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
    (y == 1 ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::domain_error("undefined AUC: needs both classes");
  }

  // Mann-Whitney statistic with midranks; ties credit half.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] < scores[b];
                   });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // 1-based midrank of the tie group [i, j): sums of halves stay exact.
    const double midrank =
        0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double u =
      pos_rank_sum -
      0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

double phi_of(const Prediction& pred, ScoreKind kind) {
  return kind == ScoreKind::logit ? pred.score : pred.prob;
}

// d phi / d score, for chaining through score_grad.
double phi_chain(const Prediction& pred, ScoreKind kind) {
  return kind == ScoreKind::logit ? 1.0 : pred.prob * (1.0 - pred.prob);
}

}  // namespace

LossGrad auc_surrogate_grad(const ModelSpec& spec, const ParamVector& params,
                            const Batch& pos, const Batch& neg,
                            ScoreKind score_kind) {
  if (pos.empty() || neg.empty()) {
    throw std::invalid_argument(
        "pairwise surrogate needs both classes non-empty");
  }

  std::vector<Prediction> pred_pos(pos.size()), pred_neg(neg.size());
  for (std::size_t j = 0; j < pos.size(); ++j) {
    pred_pos[j] = forward(spec, params, pos[j]->features);
  }
  for (std::size_t i = 0; i < neg.size(); ++i) {
    pred_neg[i] = forward(spec, params, neg[i]->features);
  }

  const double scale =
      1.0 / (static_cast<double>(neg.size()) * static_cast<double>(pos.size()));

  double loss = 0.0;
  std::vector<double> coef_neg(neg.size(), 0.0), coef_pos(pos.size(), 0.0);
  for (std::size_t i = 0; i < neg.size(); ++i) {
    const double phi_n = phi_of(pred_neg[i], score_kind);
    for (std::size_t j = 0; j < pos.size(); ++j) {
      const double s = 1.0 + phi_n - phi_of(pred_pos[j], score_kind);
      loss += scale * s * s;
      const double ds = 2.0 * scale * s;
      coef_neg[i] += ds;
      coef_pos[j] -= ds;
    }
  }

  LossGrad out;
  out.loss = loss;
  out.grad = zero_params(spec);
  for (std::size_t i = 0; i < neg.size(); ++i) {
    const ParamVector g = score_grad(spec, params, neg[i]->features);
    axpy_inplace(out.grad, g, coef_neg[i] * phi_chain(pred_neg[i], score_kind));
  }
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const ParamVector g = score_grad(spec, params, pos[j]->features);
    axpy_inplace(out.grad, g, coef_pos[j] * phi_chain(pred_pos[j], score_kind));
  }
  return out;
}

namespace {

void split_by_expert_label(const Batch& batch, Batch& pos, Batch& neg) {
  for (const Instance* inst : batch) {
    (label_of(*inst, LabelSource::expert) == 1 ? pos : neg).push_back(inst);
  }
  if (pos.empty() || neg.empty()) {
    throw std::domain_error(
        "reward batch contains a single class; sample the reward batch "
        "stratified so both classes are present");
  }
}

}  // namespace

LossGrad reward_loss_grad(const ModelSpec& spec, const ParamVector& params,
                          const Batch& reward_batch,
                          const RewardLossConfig& config) {
  config.validate();
  if (reward_batch.empty()) {
    throw std::invalid_argument("reward batch is empty");
  }
  Batch pos, neg;
  split_by_expert_label(reward_batch, pos, neg);

  // Mean cross-entropy term.
  const double inv_q = 1.0 / static_cast<double>(reward_batch.size());
  double ce_loss = 0.0;
  ParamVector ce_g = zero_params(spec);
  for (const Instance* inst : reward_batch) {
    const LossGrad lg = ce_grad(spec, params, inst->features,
                                label_of(*inst, LabelSource::expert));
    ce_loss += lg.loss;
    axpy_inplace(ce_g, lg.grad, inv_q);
  }
  ce_loss *= inv_q;

  const LossGrad surr =
      auc_surrogate_grad(spec, params, pos, neg, config.score_kind);

  LossGrad out;
  out.loss = config.ce_mix * ce_loss + (1.0 - config.ce_mix) * surr.loss;
  out.grad = zero_params(spec);
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    out.grad.values[i] =
        config.ce_mix * ce_g[i] + (1.0 - config.ce_mix) * surr.grad[i];
  }
  return out;
}

double reward_loss(const ModelSpec& spec, const ParamVector& params,
                   const Batch& reward_batch, const RewardLossConfig& config) {
  config.validate();
  if (reward_batch.empty()) {
    throw std::invalid_argument("reward batch is empty");
  }
  Batch pos, neg;
  split_by_expert_label(reward_batch, pos, neg);

  const double inv_q = 1.0 / static_cast<double>(reward_batch.size());
  double ce_loss = 0.0;
  std::vector<double> phi_pos(pos.size()), phi_neg(neg.size());
  std::size_t pi = 0, ni = 0;
  for (const Instance* inst : reward_batch) {
    const Prediction pred = forward(spec, params, inst->features);
    const int y = label_of(*inst, LabelSource::expert);
    constexpr double kLogClamp = 1e-12;
    ce_loss += y == 1 ? -std::log(std::max(pred.prob, kLogClamp))
                      : -std::log(std::max(1.0 - pred.prob, kLogClamp));
    if (y == 1) {
      phi_pos[pi++] = phi_of(pred, config.score_kind);
    } else {
      phi_neg[ni++] = phi_of(pred, config.score_kind);
    }
  }
  ce_loss *= inv_q;

  const double scale =
      1.0 / (static_cast<double>(neg.size()) * static_cast<double>(pos.size()));
  double surr = 0.0;
  for (double pn : phi_neg) {
    for (double pp : phi_pos) {
      const double s = 1.0 + pn - pp;
      surr += scale * s * s;
    }
  }
  return config.ce_mix * ce_loss + (1.0 - config.ce_mix) * surr;
}

}  // namespace rsgd
