#include "rsgd/featurize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rsgd/data_model.hpp"
#include "rsgd/rng.hpp"

namespace rsgd {

namespace {

constexpr std::uint64_t kStreamDirection = 0xfea7'00;
constexpr std::uint64_t kStreamCrowd = 0xfea7'01;
constexpr std::uint64_t kStreamUnlabeled = 0xfea7'02;
constexpr std::uint64_t kStreamEval = 0xfea7'03;
constexpr std::uint64_t kStreamSplit = 0xfea7'04;

bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

// n-gram separator byte; cannot occur inside whitespace-split tokens.
constexpr unsigned char kTokenSep = 0x1f;

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(lowercase
                            ? static_cast<char>(std::tolower(
                                  static_cast<unsigned char>(ch)))
                            : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace

void HashFeaturizerConfig::validate() const {
  if (!is_power_of_two(dimension) || dimension < (1u << 8) ||
      dimension > (1u << 20)) {
    throw std::invalid_argument(
        "featurizer dimension must be a power of two in [2^8, 2^20]");
  }
  if (ngram_min < 1 || ngram_min > ngram_max || ngram_max > 3) {
    throw std::invalid_argument("ngram range must satisfy 1 <= min <= max <= 3");
  }
}

HashedFeatures hash_features(std::string_view text,
                             const HashFeaturizerConfig& config) {
  config.validate();

  HashedFeatures out;
  out.features.dim = config.dimension;

  const auto tokens = tokenize(text, config.lowercase);
  if (tokens.empty()) {
    out.empty_input = true;
    return out;
  }

  std::map<std::uint32_t, double> buckets;
  for (std::uint32_t n = config.ngram_min; n <= config.ngram_max; ++n) {
    if (tokens.size() < n) continue;
    for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) h = fnv1a64(&kTokenSep, 1, h);
        h = fnv1a64(tokens[start + k].data(), tokens[start + k].size(), h);
      }
      h = mix64(h);
      const auto bucket = static_cast<std::uint32_t>(h & (config.dimension - 1));
      const double sign =
          config.signed_hashing && (h >> 63) != 0 ? -1.0 : 1.0;
      buckets[bucket] += sign;
    }
  }

  for (const auto& [idx, val] : buckets) {
    if (val != 0.0) {
      out.features.indices.push_back(idx);
      out.features.values.push_back(val);
    }
  }
  out.features.l2_normalize();
  return out;
}

void SynthConfig::validate() const {
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("crowd set needs both classes");
  }
  if (n_eval_pos == 0 || n_eval_neg == 0) {
    throw std::invalid_argument("eval set needs both classes");
  }
  if (dim == 0) throw std::invalid_argument("dim must be >= 1");
  if (!(class_separation > 0.0)) {
    throw std::invalid_argument("class_separation must be > 0");
  }
  for (double rate : {noise_ratio, noise_ratio_pos.value_or(0.0),
                      noise_ratio_neg.value_or(0.0)}) {
    if (!(rate >= 0.0) || rate >= 1.0) {
      throw std::invalid_argument("noise ratios must lie in [0, 1)");
    }
  }
  if (!(expert_ratio > 0.0) || expert_ratio > 1.0) {
    throw std::invalid_argument("expert_ratio must lie in (0, 1]");
  }
}

namespace {

SparseVector gaussian_point(Rng& rng, const std::vector<double>& mean) {
  SparseVector x;
  x.dim = static_cast<std::uint32_t>(mean.size());
  x.indices.resize(mean.size());
  x.values.resize(mean.size());
  for (std::size_t d = 0; d < mean.size(); ++d) {
    x.indices[d] = static_cast<std::uint32_t>(d);
    x.values[d] = mean[d] + rng.normal();
  }
  return x;
}

std::string padded_id(char prefix, std::size_t index) {
  std::string digits = std::to_string(index);
  std::string out(1, prefix);
  out.append(7 - std::min<std::size_t>(7, digits.size()), '0');
  out += digits;
  return out;
}

}  // namespace

SynthResult synth_generate(const SynthConfig& config) {
  config.validate();

  // Random unit direction separating the class means.
  Rng dir_rng = Rng::keyed(config.seed, kStreamDirection);
  std::vector<double> direction(config.dim);
  double norm = 0.0;
  for (double& d : direction) {
    d = dir_rng.normal();
    norm += d * d;
  }
  norm = std::sqrt(norm);
  std::vector<double> mean_pos(config.dim), mean_neg(config.dim);
  for (std::size_t d = 0; d < config.dim; ++d) {
    const double u = direction[d] / norm;
    mean_pos[d] = 0.5 * config.class_separation * u;
    mean_neg[d] = -0.5 * config.class_separation * u;
  }

  SynthResult out;

  // Crowd: expert label is the true label, crowd label is flipped at the
  // noise rate. Per-instance randomness is keyed by (seed, role, index).
  std::size_t flipped = 0;
  const std::size_t n_crowd = config.n_pos + config.n_neg;
  out.bundle.crowd.reserve(n_crowd);
  for (std::size_t k = 0; k < n_crowd; ++k) {
    Rng rng = Rng::keyed(config.seed, kStreamCrowd, k);
    const int true_label = k < config.n_pos ? 1 : 0;
    Instance inst;
    inst.id = padded_id('c', k);
    inst.features = gaussian_point(rng, true_label == 1 ? mean_pos : mean_neg);
    inst.expert_label = true_label;
    const bool flip = rng.uniform01() < config.flip_rate(true_label);
    inst.crowd_label = flip ? 1 - true_label : true_label;
    flipped += flip ? 1 : 0;
    out.bundle.crowd.push_back(std::move(inst));
  }

  const std::size_t n_unl = config.n_unlabeled_pos + config.n_unlabeled_neg;
  out.bundle.unlabeled.reserve(n_unl);
  for (std::size_t k = 0; k < n_unl; ++k) {
    Rng rng = Rng::keyed(config.seed, kStreamUnlabeled, k);
    const int true_label = k < config.n_unlabeled_pos ? 1 : 0;
    Instance inst;
    inst.id = padded_id('u', k);
    inst.features = gaussian_point(rng, true_label == 1 ? mean_pos : mean_neg);
    out.truth.labels.emplace(inst.id, true_label);
    out.bundle.unlabeled.push_back(std::move(inst));
  }

  const std::size_t n_eval = config.n_eval_pos + config.n_eval_neg;
  out.bundle.eval.reserve(n_eval);
  for (std::size_t k = 0; k < n_eval; ++k) {
    Rng rng = Rng::keyed(config.seed, kStreamEval, k);
    const int true_label = k < config.n_eval_pos ? 1 : 0;
    Instance inst;
    inst.id = padded_id('v', k);
    inst.features = gaussian_point(rng, true_label == 1 ? mean_pos : mean_neg);
    inst.expert_label = true_label;
    out.bundle.eval.push_back(std::move(inst));
  }

  SplitSpec split;
  split.expert_ratio = config.expert_ratio;
  split.seed = key_combine(config.seed, kStreamSplit);
  split.merge_expert_into_crowd = config.merge_expert_into_crowd;
  RewardSplit rs = split_reward(out.bundle.crowd, split);
  out.bundle.crowd = std::move(rs.crowd);
  out.bundle.reward = std::move(rs.reward);

  out.summary.empirical_noise_ratio =
      static_cast<double>(flipped) / static_cast<double>(n_crowd);
  try {
    out.summary.crowd_imbalance =
        imbalance_ratio(out.bundle.crowd, LabelSource::crowd);
  } catch (const std::domain_error&) {
    out.summary.crowd_imbalance = std::numeric_limits<double>::quiet_NaN();
  }
  out.summary.reward_imbalance =
      imbalance_ratio(out.bundle.reward, LabelSource::expert);
  out.summary.unlabeled_imbalance =
      config.n_unlabeled_pos == 0
          ? std::numeric_limits<double>::quiet_NaN()
          : static_cast<double>(config.n_unlabeled_neg) /
                static_cast<double>(config.n_unlabeled_pos);
  return out;
}

}  // namespace rsgd
