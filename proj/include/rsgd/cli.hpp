#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsgd/config_file.hpp"
#include "rsgd/featurize.hpp"
#include "rsgd/model.hpp"
#include "rsgd/trainer.hpp"

namespace rsgd::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // usage / parse failures
inline constexpr int kExitTrainFail = 2;   // training aborted
inline constexpr int kExitCkptMismatch = 3;

struct SynthArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

struct TrainArgs {
  std::string dataset_dir;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
};

struct SweepArgs {
  std::string grid;  // "lambda=0.1,0.3" | "gamma=2,5" | "rho=0.1,0.2"
  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
};

struct EvalArgs {
  std::string checkpoint_path;
  std::string dataset_path;
  double decision_threshold = 0.5;
};

int cmd_synth(const SynthArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_sweep(const SweepArgs& args);
int cmd_eval(const EvalArgs& args);

// Config-to-struct translation, shared with tests.
SynthConfig synth_config_from(const ConfigFile& cfg);
ModelSpec model_spec_from(const ConfigFile& cfg, std::uint32_t input_dim,
                          std::uint64_t seed);
TrainConfig train_config_from(const ConfigFile& cfg);

}  // namespace rsgd::cli
