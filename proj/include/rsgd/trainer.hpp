#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsgd/instance.hpp"
#include "rsgd/metrics.hpp"
#include "rsgd/reweight.hpp"
#include "rsgd/rng.hpp"

namespace rsgd {

enum class Method { egal, supervised, uniform_ssl };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Sampler substream tags; fixed so runs are reproducible and external
// tooling can replay the exact batch sequence of a training run. The
// stream passed to a sampler is key_combine(tag, rebuild_count).
namespace sampler_streams {
inline constexpr std::uint64_t crowd = 0x7ba101;
inline constexpr std::uint64_t unlabeled = 0x7ba102;
inline constexpr std::uint64_t reward = 0x7ba103;
}  // namespace sampler_streams

// Crowd instances whose raw weight stayed non-positive over their last
// `window` encounters (with at least `min_encounters` total) move to the
// unlabeled pool, stripped of labels. One-way.
struct MigrationPolicy {
  bool enabled = false;
  std::uint32_t window = 5;
  std::uint32_t min_encounters = 5;
};

struct TrainConfig {
  std::uint64_t total_steps = 10000;
  std::uint32_t eval_every = 512;
  std::uint32_t batch_labeled = 32;    // n
  std::uint32_t batch_unlabeled = 32;  // m
  std::uint32_t batch_reward = 8;      // q, >= 2
  double learning_rate = 0.05;
  double unsup_weight = 1.0;
  RewardLossConfig reward_loss;
  PseudoLabelConfig pseudo;
  std::uint32_t patience = 10;  // evaluations without improvement before stop
  MigrationPolicy migration;
  std::uint64_t seed = 1;
  Method method = Method::egal;

  // Debug hook invoked after every step with the updated parameters.
  std::function<void(std::uint64_t step, const ParamVector&)> step_observer;

  void validate() const;  // throws std::invalid_argument
};

struct EvalRecord {
  std::uint64_t step = 0;
  double reward_loss = 0.0;            // NaN when the reward set is empty
  std::optional<double> reward_bacc;   // early-stopping monitor
  MetricsReport eval;
  std::size_t zero_weight_labeled = 0; // from the meta step at the boundary
  std::vector<std::string> migrated_ids;
};

struct TrainHistory {
  std::vector<EvalRecord> records;  // steps strictly increasing
  std::uint64_t steps_run = 0;
  std::uint64_t best_step = 0;      // 0 = initial parameters
  bool stopped_early = false;
  bool aborted = false;
  std::string abort_reason;
  std::size_t migrated_total = 0;
  bool sampler_fell_back = false;   // some batch size exceeded its dataset
};

struct TrainResult {
  ParamVector params;  // best checkpoint by eval-set bACC (ties: earliest)
  TrainHistory history;
};

// Epoch-shuffled sampling without replacement; batches may span an epoch
// boundary. Falls back to with-replacement draws when the requested batch
// is larger than the dataset.
class BatchSampler {
 public:
  BatchSampler(std::size_t size, std::uint64_t seed, std::uint64_t stream);
  std::vector<std::size_t> next(std::size_t k);
  bool fell_back() const { return fell_back_; }

 private:
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  Rng rng_;
  bool fell_back_ = false;
};

// Reward-batch sampler: largest-remainder apportionment across the two
// strata with at least one instance of each class per batch.
class StratifiedSampler {
 public:
  StratifiedSampler(const std::vector<std::size_t>& pos_indices,
                    const std::vector<std::size_t>& neg_indices,
                    std::uint64_t seed, std::uint64_t stream);
  std::vector<std::size_t> next(std::size_t k);  // k >= 2

 private:
  std::vector<std::size_t> pos_, neg_;
  BatchSampler pos_sampler_, neg_sampler_;
};

struct MigrationCandidate {
  std::size_t crowd_index = 0;
  std::uint32_t encounters = 0;
  std::uint32_t consecutive_nonpositive = 0;
};

struct MigrationOutcome {
  std::vector<std::string> migrated_ids;
  std::vector<std::string> refused_ids;  // class-extinction guard hits
};

// Applies the policy to tracked per-instance weight history: qualifying
// crowd instances move to `unlabeled` with labels stripped. `active`
// marks live crowd rows; `protected_ids` (reward members) never migrate,
// and the last crowd-positive is refused to avoid class extinction.
MigrationOutcome migrate_false_labeled(
    const std::vector<MigrationCandidate>& candidates,
    const MigrationPolicy& policy, std::vector<Instance>& crowd,
    std::vector<char>& active, std::vector<Instance>& unlabeled,
    const std::vector<std::string>& protected_ids);

// Runs the full training loop for the configured method. Evaluates every
// `eval_every` steps, keeps the best eval-bACC checkpoint, stops early
// after `patience` evaluations without improvement of the reward-set bACC
// (eval bACC when the reward set is empty), and applies the migration
// policy at evaluation boundaries.
TrainResult train(const DatasetBundle& bundle, const ModelSpec& spec,
                  const TrainConfig& config);

}  // namespace rsgd
