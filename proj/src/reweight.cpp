#include "rsgd/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsgd/data_model.hpp"
#include "rsgd/parallel.hpp"

namespace rsgd {

std::vector<double> meta_raw_weights(
    const ParamVector& reward_grad,
    const std::vector<ParamVector>& labeled_grads,
    const std::vector<ParamVector>& unsup_grads, double unsup_weight) {
  std::vector<double> raw;
  raw.reserve(labeled_grads.size() + unsup_grads.size());
  for (const ParamVector& g : labeled_grads) {
    raw.push_back(dot(reward_grad, g));
  }
  for (const ParamVector& g : unsup_grads) {
    raw.push_back(unsup_weight * dot(reward_grad, g));
  }
  return raw;
}

std::vector<double> rectify(const std::vector<double>& raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = std::max(raw[i], 0.0);
  }
  return out;
}

std::vector<double> normalize(const std::vector<double>& nonneg) {
  double sum = 0.0;
  for (double v : nonneg) {
    if (v < 0.0) {
      throw std::invalid_argument(
          "normalize requires non-negative entries; rectify must run first");
    }
    sum += v;
  }
  const double denom = sum == 0.0 ? 1.0 : sum;
  std::vector<double> out(nonneg.size());
  for (std::size_t i = 0; i < nonneg.size(); ++i) {
    out[i] = nonneg[i] / denom;
  }
  return out;
}

MetaStepResult meta_step(const ModelSpec& spec, const ParamVector& params,
                         const Batch& labeled, const Batch& unlabeled,
                         const Batch& reward, const MetaStepConfig& config) {
  if (labeled.empty()) {
    throw std::invalid_argument("meta step needs a non-empty labeled batch");
  }
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be > 0");
  }
  const std::size_t n = labeled.size(), m = unlabeled.size();

  // Pseudo-labels are assigned once at the current parameters and reused
  // for both the meta gradient and the final update.
  std::vector<PseudoLabel> pls(m);
  for (std::size_t j = 0; j < m; ++j) {
    pls[j] = pseudo_label(spec, params, unlabeled[j]->features, config.pseudo);
  }

  // Per-sample gradients, all at the current parameters.
  std::vector<ParamVector> labeled_grads(n), unsup_grads(m);
  std::vector<double> labeled_losses(n), unsup_losses(m);
  parallel_for(n + m, [&](std::size_t idx) {
    if (idx < n) {
      LossGrad lg = ce_grad(spec, params, labeled[idx]->features,
                            label_of(*labeled[idx], LabelSource::crowd));
      labeled_losses[idx] = lg.loss;
      labeled_grads[idx] = std::move(lg.grad);
    } else {
      const std::size_t j = idx - n;
      LossGrad lg =
          unsup_loss_grad(spec, params, unlabeled[j]->features, pls[j]);
      unsup_losses[j] = lg.loss;
      unsup_grads[j] = std::move(lg.grad);
    }
  });

  MetaStepResult out;
  out.diag.reward_loss_before = std::numeric_limits<double>::quiet_NaN();
  out.diag.reward_loss_after = std::numeric_limits<double>::quiet_NaN();

  if (config.weight_mode == WeightMode::meta) {
    const LossGrad reward_lg =
        reward_loss_grad(spec, params, reward, config.reward_loss);
    out.diag.reward_loss_before = reward_lg.loss;
    out.weights.raw = meta_raw_weights(reward_lg.grad, labeled_grads,
                                       unsup_grads, config.unsup_weight);
    out.weights.values = normalize(rectify(out.weights.raw));
  } else {
    out.weights.values.assign(n + m, 0.0);
    const double wl = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out.weights.values[i] = wl;
    if (m > 0) {
      const double wu = 1.0 / static_cast<double>(m);
      for (std::size_t j = 0; j < m; ++j) out.weights.values[n + j] = wu;
    }
    if (!reward.empty()) {
      out.diag.reward_loss_before =
          reward_loss(spec, params, reward, config.reward_loss);
    }
  }

  // Weighted descent update on the already-computed gradients.
  ParamVector update = zero_params(spec);
  for (std::size_t i = 0; i < n; ++i) {
    axpy_inplace(update, labeled_grads[i], out.weights.values[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    axpy_inplace(update, unsup_grads[j],
                 config.unsup_weight * out.weights.values[n + j]);
  }
  out.params = axpy(params, update, -config.learning_rate);
  if (!all_finite(out.params)) {
    throw std::runtime_error("non-finite parameter update");
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (out.weights.values[i] == 0.0) {
      out.diag.zero_weight_labeled += 1;
      out.diag.zero_weight_ids.push_back(labeled[i]->id);
    }
  }
  if (!reward.empty()) {
    out.diag.reward_loss_after =
        reward_loss(spec, out.params, reward, config.reward_loss);
  }
  return out;
}

}  // namespace rsgd
