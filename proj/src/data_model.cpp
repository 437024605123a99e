#include "rsgd/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "rsgd/rng.hpp"

namespace rsgd {

namespace {

constexpr std::uint64_t kStreamSplitPos = 0x5e11'01;
constexpr std::uint64_t kStreamSplitNeg = 0x5e11'02;
constexpr std::uint64_t kStreamSubsample = 0x5e11'03;

std::int64_t round_half_up(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5));
}

}  // namespace

int label_of(const Instance& inst, LabelSource source) {
  const auto& lbl =
      source == LabelSource::crowd ? inst.crowd_label : inst.expert_label;
  if (!lbl.has_value()) {
    throw std::invalid_argument(
        "instance '" + inst.id + "' has no " +
        (source == LabelSource::crowd ? "crowd" : "expert") + " label");
  }
  return *lbl;
}

void validate_bundle(const DatasetBundle& bundle, bool require_reward) {
  std::unordered_set<std::string> crowd_ids;
  for (const auto& inst : bundle.crowd) crowd_ids.insert(inst.id);

  for (const auto& inst : bundle.reward) {
    if (!crowd_ids.count(inst.id)) {
      throw std::invalid_argument("reward instance '" + inst.id +
                                  "' is not drawn from the crowd set");
    }
    if (!inst.expert_label.has_value()) {
      throw std::invalid_argument("reward instance '" + inst.id +
                                  "' lacks an expert label");
    }
  }

  std::unordered_set<std::string> train_ids = crowd_ids;
  for (const auto& inst : bundle.unlabeled) train_ids.insert(inst.id);
  for (const auto& inst : bundle.reward) train_ids.insert(inst.id);
  for (const auto& inst : bundle.eval) {
    if (train_ids.count(inst.id)) {
      throw std::invalid_argument("eval instance '" + inst.id +
                                  "' overlaps a training set");
    }
    if (!inst.expert_label.has_value()) {
      throw std::invalid_argument("eval instance '" + inst.id +
                                  "' lacks an expert label");
    }
  }

  if (require_reward) {
    std::size_t pos = 0, neg = 0;
    for (const auto& inst : bundle.reward) {
      (label_of(inst, LabelSource::expert) == 1 ? pos : neg) += 1;
    }
    if (bundle.reward.size() < 2 || pos == 0 || neg == 0) {
      throw std::invalid_argument(
          "reward set needs at least two instances covering both classes");
    }
  }
}

double imbalance_ratio(const std::vector<Instance>& instances,
                       LabelSource source) {
  std::size_t pos = 0, neg = 0;
  for (const auto& inst : instances) {
    (label_of(inst, source) == 1 ? pos : neg) += 1;
  }
  if (pos == 0) {
    throw std::domain_error(
        "undefined imbalance ratio: no positive instances");
  }
  return static_cast<double>(neg) / static_cast<double>(pos);
}

RewardSplit split_reward(const std::vector<Instance>& crowd_with_expert,
                         const SplitSpec& spec) {
  if (!(spec.expert_ratio > 0.0) || spec.expert_ratio > 1.0) {
    throw std::invalid_argument("expert_ratio must lie in (0, 1]");
  }
  const std::size_t n = crowd_with_expert.size();
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = crowd_with_expert[i];
    if (!inst.crowd_label.has_value() || !inst.expert_label.has_value()) {
      throw std::invalid_argument("instance '" + inst.id +
                                  "' must carry both labels for the split");
    }
    (*inst.expert_label == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty()) {
    throw std::invalid_argument("empty stratum: no positive expert labels");
  }
  if (neg.empty()) {
    throw std::invalid_argument("empty stratum: no negative expert labels");
  }

  const std::int64_t total =
      round_half_up(spec.expert_ratio * static_cast<double>(n));
  if (total < 2) {
    throw std::invalid_argument(
        "expert_ratio * crowd size rounds below two instances");
  }

  // Largest-remainder apportionment across the two strata.
  const double quota_pos =
      static_cast<double>(total) * static_cast<double>(pos.size()) /
      static_cast<double>(n);
  std::int64_t take_pos = static_cast<std::int64_t>(std::floor(quota_pos));
  std::int64_t take_neg = static_cast<std::int64_t>(
      std::floor(static_cast<double>(total) * static_cast<double>(neg.size()) /
                 static_cast<double>(n)));
  while (take_pos + take_neg < total) {
    const double rem_pos = quota_pos - static_cast<double>(take_pos);
    const double rem_neg =
        (static_cast<double>(total) * static_cast<double>(neg.size()) /
         static_cast<double>(n)) -
        static_cast<double>(take_neg);
    if (rem_pos >= rem_neg) {
      ++take_pos;
    } else {
      ++take_neg;
    }
  }
  // The pairwise reward loss needs both classes; steal one seat if a
  // non-empty stratum was apportioned zero.
  if (take_pos == 0) {
    ++take_pos;
    --take_neg;
  }
  if (take_neg == 0) {
    ++take_neg;
    --take_pos;
  }
  take_pos = std::min<std::int64_t>(take_pos,
                                    static_cast<std::int64_t>(pos.size()));
  take_neg = std::min<std::int64_t>(take_neg,
                                    static_cast<std::int64_t>(neg.size()));

  Rng rng_pos = Rng::keyed(spec.seed, kStreamSplitPos);
  Rng rng_neg = Rng::keyed(spec.seed, kStreamSplitNeg);
  rng_pos.shuffle(pos);
  rng_neg.shuffle(neg);

  std::vector<std::size_t> picked(pos.begin(), pos.begin() + take_pos);
  picked.insert(picked.end(), neg.begin(), neg.begin() + take_neg);
  std::sort(picked.begin(), picked.end());

  RewardSplit out;
  out.crowd = crowd_with_expert;
  out.reward.reserve(picked.size());
  for (std::size_t idx : picked) {
    out.reward.push_back(crowd_with_expert[idx]);
    if (spec.merge_expert_into_crowd) {
      out.crowd[idx].crowd_label = out.crowd[idx].expert_label;
    }
  }
  return out;
}

std::vector<Instance> subsample_to_imbalance(
    const std::vector<Instance>& instances, double target, std::uint64_t seed,
    LabelSource source) {
  if (!(target >= 1.0)) {
    throw std::invalid_argument("imbalance target must be >= 1");
  }
  const double current = imbalance_ratio(instances, source);
  if (target < current) {
    throw std::invalid_argument(
        "imbalance target " + std::to_string(target) +
        " is below the current ratio " + std::to_string(current) +
        "; only positive removal is supported");
  }

  std::vector<std::size_t> pos;
  std::size_t neg_count = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (label_of(instances[i], source) == 1) {
      pos.push_back(i);
    } else {
      ++neg_count;
    }
  }
  const auto keep = static_cast<std::size_t>(
      std::floor(static_cast<double>(neg_count) / target));

  Rng rng = Rng::keyed(seed, kStreamSubsample);
  rng.shuffle(pos);
  std::unordered_set<std::size_t> kept(pos.begin(), pos.begin() + keep);

  std::vector<Instance> out;
  out.reserve(neg_count + keep);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (label_of(instances[i], source) == 0 || kept.count(i)) {
      out.push_back(instances[i]);
    }
  }
  return out;
}

}  // namespace rsgd
