#include "rsgd/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "rsgd/data_model.hpp"

namespace rsgd {

const char* method_name(Method m) {
  switch (m) {
    case Method::egal: return "egal";
    case Method::supervised: return "supervised";
    case Method::uniform_ssl: return "uniform_ssl";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "egal") return Method::egal;
  if (name == "supervised") return Method::supervised;
  if (name == "uniform_ssl") return Method::uniform_ssl;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected egal, supervised or uniform_ssl)");
}

void TrainConfig::validate() const {
  if (eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
  if (batch_labeled < 1) {
    throw std::invalid_argument("labeled batch size must be >= 1");
  }
  if (batch_reward < 2) {
    throw std::invalid_argument("reward batch size must be >= 2");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be > 0");
  }
  if (!(unsup_weight >= 0.0)) {
    throw std::invalid_argument("unsup_weight must be >= 0");
  }
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (migration.enabled && migration.window < 1) {
    throw std::invalid_argument("migration window must be >= 1");
  }
  reward_loss.validate();
  pseudo.validate();
}

BatchSampler::BatchSampler(std::size_t size, std::uint64_t seed,
                           std::uint64_t stream)
    : rng_(Rng::keyed(seed, stream)) {
  if (size == 0) {
    throw std::invalid_argument("cannot sample from an empty dataset");
  }
  order_.resize(size);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  rng_.shuffle(order_);
}

std::vector<std::size_t> BatchSampler::next(std::size_t k) {
  std::vector<std::size_t> batch;
  batch.reserve(k);
  if (k > order_.size()) {
    // Requested batch exceeds the dataset: with-replacement fallback.
    fell_back_ = true;
    for (std::size_t i = 0; i < k; ++i) {
      batch.push_back(order_[rng_.bounded(order_.size())]);
    }
    return batch;
  }
  while (batch.size() < k) {
    if (cursor_ == order_.size()) {
      rng_.shuffle(order_);
      cursor_ = 0;
    }
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

StratifiedSampler::StratifiedSampler(const std::vector<std::size_t>& pos_indices,
                                     const std::vector<std::size_t>& neg_indices,
                                     std::uint64_t seed, std::uint64_t stream)
    : pos_(pos_indices),
      neg_(neg_indices),
      pos_sampler_(pos_indices.size(), seed, key_combine(stream, 1)),
      neg_sampler_(neg_indices.size(), seed, key_combine(stream, 2)) {}

std::vector<std::size_t> StratifiedSampler::next(std::size_t k) {
  if (k < 2) {
    throw std::invalid_argument("stratified batch needs k >= 2");
  }
  const double total = static_cast<double>(pos_.size() + neg_.size());
  const double quota_pos =
      static_cast<double>(k) * static_cast<double>(pos_.size()) / total;
  auto take_pos = static_cast<std::size_t>(std::floor(quota_pos));
  auto take_neg = static_cast<std::size_t>(std::floor(
      static_cast<double>(k) * static_cast<double>(neg_.size()) / total));
  if (take_pos + take_neg < k) {
    // one remainder seat; larger fractional part wins, ties to positives
    const double rem_pos = quota_pos - static_cast<double>(take_pos);
    const double rem_neg =
        static_cast<double>(k) * static_cast<double>(neg_.size()) / total -
        static_cast<double>(take_neg);
    if (rem_pos >= rem_neg) {
      ++take_pos;
    } else {
      ++take_neg;
    }
  }
  if (take_pos == 0) {
    ++take_pos;
    --take_neg;
  }
  if (take_neg == 0) {
    ++take_neg;
    --take_pos;
  }

  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t p : pos_sampler_.next(take_pos)) out.push_back(pos_[p]);
  for (std::size_t p : neg_sampler_.next(take_neg)) out.push_back(neg_[p]);
  return out;
}

MigrationOutcome migrate_false_labeled(
    const std::vector<MigrationCandidate>& candidates,
    const MigrationPolicy& policy, std::vector<Instance>& crowd,
    std::vector<char>& active, std::vector<Instance>& unlabeled,
    const std::vector<std::string>& protected_ids) {
  MigrationOutcome out;
  if (!policy.enabled) return out;

  std::unordered_set<std::string> protected_set(protected_ids.begin(),
                                                protected_ids.end());
  std::size_t live_pos = 0;
  for (std::size_t i = 0; i < crowd.size(); ++i) {
    if (active[i] && crowd[i].crowd_label == 1) ++live_pos;
  }

  for (const MigrationCandidate& cand : candidates) {
    if (cand.encounters < policy.min_encounters) continue;
    if (cand.consecutive_nonpositive < policy.window) continue;
    if (cand.crowd_index >= crowd.size() || !active[cand.crowd_index]) continue;
    const Instance& inst = crowd[cand.crowd_index];
    if (protected_set.count(inst.id)) continue;

    const bool is_pos = inst.crowd_label == 1;
    if (is_pos && live_pos <= 1) {
      // class-extinction guard: never migrate the last crowd positive
      out.refused_ids.push_back(inst.id);
      continue;
    }

    Instance moved = inst;
    moved.crowd_label.reset();
    moved.expert_label.reset();
    unlabeled.push_back(std::move(moved));
    active[cand.crowd_index] = 0;
    if (is_pos) --live_pos;
    out.migrated_ids.push_back(inst.id);
  }
  return out;
}

namespace {

struct RewardView {
  Batch all;
  bool usable = false;  // non-empty with both classes
  std::vector<std::size_t> pos, neg;
};

RewardView make_reward_view(const std::vector<Instance>& reward) {
  RewardView view;
  view.all.reserve(reward.size());
  for (std::size_t i = 0; i < reward.size(); ++i) {
    view.all.push_back(&reward[i]);
    if (label_of(reward[i], LabelSource::expert) == 1) {
      view.pos.push_back(i);
    } else {
      view.neg.push_back(i);
    }
  }
  view.usable = !view.pos.empty() && !view.neg.empty();
  return view;
}

}  // namespace

TrainResult train(const DatasetBundle& bundle, const ModelSpec& spec,
                  const TrainConfig& config) {
  spec.validate();
  config.validate();
  const bool is_egal = config.method == Method::egal;
  validate_bundle(bundle, /*require_reward=*/is_egal);
  if (bundle.crowd.empty()) {
    throw std::invalid_argument("crowd set is empty");
  }
  {
    std::size_t pos = 0, neg = 0;
    for (const auto& inst : bundle.eval) {
      (label_of(inst, LabelSource::expert) == 1 ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) {
      throw std::invalid_argument("eval set needs both classes");
    }
  }

  std::vector<Instance> crowd = bundle.crowd;
  std::vector<Instance> unlabeled = bundle.unlabeled;
  std::vector<char> active(crowd.size(), 1);
  std::vector<MigrationCandidate> stats(crowd.size());
  for (std::size_t i = 0; i < crowd.size(); ++i) stats[i].crowd_index = i;

  const RewardView reward = make_reward_view(bundle.reward);
  std::vector<std::string> protected_ids;
  for (const Instance* inst : reward.all) protected_ids.push_back(inst->id);

  const std::size_t n = config.batch_labeled;
  std::size_t m =
      config.method == Method::supervised ? 0 : config.batch_unlabeled;

  MetaStepConfig step_config;
  step_config.learning_rate = config.learning_rate;
  step_config.unsup_weight =
      config.method == Method::supervised ? 0.0 : config.unsup_weight;
  step_config.reward_batch_size = config.batch_reward;
  step_config.reward_loss = config.reward_loss;
  step_config.pseudo = config.pseudo;
  step_config.weight_mode = is_egal ? WeightMode::meta : WeightMode::uniform;

  ParamVector params = init_params(spec);
  TrainResult out;
  out.params = params;
  TrainHistory& history = out.history;

  // Samplers are rebuilt whenever migration changes the pools.
  std::uint64_t rebuild = 0;
  std::vector<std::size_t> active_rows(crowd.size());
  std::iota(active_rows.begin(), active_rows.end(), std::size_t{0});
  auto make_crowd_sampler = [&] {
    return BatchSampler(active_rows.size(), config.seed,
                        key_combine(sampler_streams::crowd, rebuild));
  };
  auto make_unlabeled_sampler = [&]() -> std::optional<BatchSampler> {
    if (m == 0 || unlabeled.empty()) return std::nullopt;
    return BatchSampler(unlabeled.size(), config.seed,
                        key_combine(sampler_streams::unlabeled, rebuild));
  };
  BatchSampler crowd_sampler = make_crowd_sampler();
  std::optional<BatchSampler> unlabeled_sampler = make_unlabeled_sampler();
  std::optional<StratifiedSampler> reward_sampler;
  if (is_egal) {
    reward_sampler.emplace(reward.pos, reward.neg, config.seed,
                           sampler_streams::reward);
  }

  double best_eval_bacc = -std::numeric_limits<double>::infinity();
  double best_monitor = -std::numeric_limits<double>::infinity();
  std::uint32_t since_improve = 0;
  std::size_t last_zero_weight = 0;

  std::uint64_t t = 0;
  for (; t < config.total_steps; ++t) {
    Batch labeled_batch;
    labeled_batch.reserve(n);
    for (std::size_t p : crowd_sampler.next(n)) {
      labeled_batch.push_back(&crowd[active_rows[p]]);
    }
    Batch unl_batch;
    if (unlabeled_sampler.has_value()) {
      unl_batch.reserve(m);
      for (std::size_t p : unlabeled_sampler->next(m)) {
        unl_batch.push_back(&unlabeled[p]);
      }
    }
    Batch reward_batch;
    if (reward_sampler.has_value()) {
      reward_batch.reserve(config.batch_reward);
      for (std::size_t p : reward_sampler->next(config.batch_reward)) {
        reward_batch.push_back(&bundle.reward[p]);
      }
    }

    MetaStepResult step;
    try {
      step = meta_step(spec, params, labeled_batch, unl_batch, reward_batch,
                       step_config);
    } catch (const std::exception& e) {
      history.aborted = true;
      history.abort_reason =
          "step " + std::to_string(t) + ": " + e.what();
      break;
    }
    params = std::move(step.params);
    last_zero_weight = step.diag.zero_weight_labeled;
    if (config.step_observer) config.step_observer(t + 1, params);

    if (is_egal && !step.weights.raw.empty()) {
      // Track encounter outcomes for the migration policy. A batch slot is
      // one encounter; duplicates across an epoch boundary count twice.
      const auto batch_rows = labeled_batch;  // parallel to raw[0..n)
      for (std::size_t i = 0; i < batch_rows.size(); ++i) {
        const auto row = static_cast<std::size_t>(batch_rows[i] - crowd.data());
        MigrationCandidate& st = stats[row];
        st.encounters += 1;
        if (step.weights.raw[i] <= 0.0) {
          st.consecutive_nonpositive += 1;
        } else {
          st.consecutive_nonpositive = 0;
        }
      }
    }

    if ((t + 1) % config.eval_every != 0) continue;

    EvalRecord rec;
    rec.step = t + 1;
    rec.zero_weight_labeled = last_zero_weight;
    if (reward.usable) {
      rec.reward_loss =
          reward_loss(spec, params, reward.all, config.reward_loss);
      rec.reward_bacc = evaluate(spec, params, bundle.reward).bacc;
    } else {
      rec.reward_loss = std::numeric_limits<double>::quiet_NaN();
    }
    rec.eval = evaluate(spec, params, bundle.eval);

    const double eval_bacc = rec.eval.bacc.value();
    if (eval_bacc > best_eval_bacc) {
      best_eval_bacc = eval_bacc;
      out.params = params;
      history.best_step = rec.step;
    }
    const double monitor = rec.reward_bacc.value_or(eval_bacc);
    if (monitor > best_monitor) {
      best_monitor = monitor;
      since_improve = 0;
    } else {
      since_improve += 1;
    }

    if (is_egal && config.migration.enabled) {
      std::vector<MigrationCandidate> candidates;
      for (std::size_t row : active_rows) candidates.push_back(stats[row]);
      MigrationOutcome mig = migrate_false_labeled(
          candidates, config.migration, crowd, active, unlabeled,
          protected_ids);
      if (!mig.migrated_ids.empty()) {
        history.migrated_total += mig.migrated_ids.size();
        active_rows.clear();
        for (std::size_t i = 0; i < crowd.size(); ++i) {
          if (active[i]) active_rows.push_back(i);
        }
        ++rebuild;
        crowd_sampler = make_crowd_sampler();
        unlabeled_sampler = make_unlabeled_sampler();
      }
      rec.migrated_ids = std::move(mig.migrated_ids);
    }

    history.records.push_back(std::move(rec));
    if (since_improve >= config.patience) {
      history.stopped_early = true;
      ++t;
      break;
    }
  }

  history.steps_run = t;
  history.sampler_fell_back =
      crowd_sampler.fell_back() ||
      (unlabeled_sampler.has_value() && unlabeled_sampler->fell_back());
  if (history.records.empty()) {
    // Nothing was evaluated: the last good parameters stand.
    out.params = params;
  }
  return out;
}

}  // namespace rsgd
