#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsgd/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"reward-set-guided instance reweighting for noisy binary "
               "classification"};
  app.require_subcommand(1);

  rsgd::cli::SynthArgs synth_args;
  std::int64_t synth_seed = -1;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--config", synth_args.config_path, "key=value config file")
      ->required();
  synth->add_option("--out-dir", synth_args.out_dir, "output directory")
      ->required();
  synth->add_option("--seed", synth_seed, "override the config seed");

  rsgd::cli::TrainArgs train_args;
  std::int64_t train_seed = -1;
  std::string train_method;
  auto* train = app.add_subcommand("train", "run a training job");
  train->add_option("--dataset-dir", train_args.dataset_dir,
                    "directory with crowd/unlabeled/reward/eval.tsv")
      ->required();
  train->add_option("--config", train_args.config_path, "key=value config file")
      ->required();
  train->add_option("--out-dir", train_args.out_dir, "output directory")
      ->required();
  train->add_option("--seed", train_seed, "override the config seed");
  train->add_option("--method", train_method,
                    "egal | supervised | uniform_ssl");

  rsgd::cli::SweepArgs sweep_args;
  std::string sweep_seeds = "1,2,3,4,5";
  auto* sweep = app.add_subcommand(
      "sweep", "grid sweep over lambda, gamma or rho with all methods");
  sweep->add_option("--grid", sweep_args.grid,
                    "grid spec, e.g. gamma=2,5,10,50")
      ->required();
  sweep->add_option("--config", sweep_args.config_path, "key=value config file")
      ->required();
  sweep->add_option("--out-dir", sweep_args.out_dir, "output directory")
      ->required();
  sweep->add_option("--seeds", sweep_seeds, "comma-separated seed list");

  rsgd::cli::EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", eval_args.checkpoint_path,
                   "checkpoint file")
      ->required();
  eval->add_option("--dataset", eval_args.dataset_path,
                   "dataset file with expert labels")
      ->required();
  eval->add_option("--threshold", eval_args.decision_threshold,
                   "decision threshold (default 0.5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : rsgd::cli::kExitUsage;
  }

  if (synth->parsed()) {
    if (synth_seed >= 0) {
      synth_args.seed = static_cast<std::uint64_t>(synth_seed);
    }
    return rsgd::cli::cmd_synth(synth_args);
  }
  if (train->parsed()) {
    if (train_seed >= 0) {
      train_args.seed = static_cast<std::uint64_t>(train_seed);
    }
    if (!train_method.empty()) train_args.method = train_method;
    return rsgd::cli::cmd_train(train_args);
  }
  if (sweep->parsed()) {
    std::size_t pos = 0;
    while (pos <= sweep_seeds.size()) {
      std::size_t comma = sweep_seeds.find(',', pos);
      if (comma == std::string::npos) comma = sweep_seeds.size();
      const std::string tok = sweep_seeds.substr(pos, comma - pos);
      if (!tok.empty()) {
        try {
          sweep_args.seeds.push_back(std::stoull(tok));
        } catch (const std::exception&) {
          std::fprintf(stderr, "sweep: malformed seed '%s'\n", tok.c_str());
          return rsgd::cli::kExitUsage;
        }
      }
      pos = comma + 1;
    }
    return rsgd::cli::cmd_sweep(sweep_args);
  }
  return rsgd::cli::cmd_eval(eval_args);
}
