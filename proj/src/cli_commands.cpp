#include "rsgd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rsgd/checkpoint.hpp"
#include "rsgd/data_model.hpp"
#include "rsgd/dataset_io.hpp"
#include "rsgd/metrics.hpp"
#include "rsgd/rng.hpp"

namespace rsgd::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      // model
      "model_kind", "hidden_dim", "init_scale",
      // training
      "method", "total_steps", "eval_every", "batch_labeled",
      "batch_unlabeled", "batch_reward", "learning_rate", "unsup_weight",
      "reward_ce_mix", "score_kind", "confidence_threshold", "patience",
      "migration_enabled", "migration_window", "migration_min_encounters",
      "seed",
      // synthetic data
      "synth_n_pos", "synth_n_neg", "synth_n_unlabeled_pos",
      "synth_n_unlabeled_neg", "synth_n_eval_pos", "synth_n_eval_neg",
      "synth_dim", "synth_class_separation", "synth_noise_ratio",
      "synth_noise_ratio_pos", "synth_noise_ratio_neg",
      "synth_expert_ratio", "synth_merge_expert_into_crowd",
      // text featurizer
      "hash_dim", "ngram_min", "ngram_max", "lowercase", "signed_hashing"};
  return keys;
}

void reject_unknown_keys(const ConfigFile& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    if (!known_keys().count(key)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

HashFeaturizerConfig featurizer_from(const ConfigFile& cfg) {
  HashFeaturizerConfig fc;
  fc.dimension = static_cast<std::uint32_t>(cfg.get_uint("hash_dim", fc.dimension));
  fc.ngram_min = static_cast<std::uint32_t>(cfg.get_uint("ngram_min", fc.ngram_min));
  fc.ngram_max = static_cast<std::uint32_t>(cfg.get_uint("ngram_max", fc.ngram_max));
  fc.lowercase = cfg.get_bool("lowercase", fc.lowercase);
  fc.signed_hashing = cfg.get_bool("signed_hashing", fc.signed_hashing);
  return fc;
}

ordered_json json_metrics(const MetricsReport& rep) {
  ordered_json j;
  j["accuracy"] = rep.accuracy;
  j["f1"] = rep.f1;
  if (rep.bacc.has_value()) {
    j["bacc"] = *rep.bacc;
  } else {
    j["bacc"] = nullptr;
  }
  if (rep.auc.has_value()) {
    j["auc"] = *rep.auc;
  } else {
    j["auc"] = nullptr;
  }
  j["confusion"] = ordered_json{{"tp", rep.confusion.tp},
                                {"fp", rep.confusion.fp},
                                {"tn", rep.confusion.tn},
                                {"fn", rep.confusion.fn}};
  return j;
}

ordered_json echo_train_config(const TrainConfig& tc, const ModelSpec& spec) {
  ordered_json j;
  j["method"] = method_name(tc.method);
  j["model_kind"] = spec.kind == ModelKind::linear ? "linear" : "one_hidden";
  j["input_dim"] = spec.input_dim;
  j["hidden_dim"] = spec.hidden_dim;
  j["init_scale"] = spec.init_scale;
  j["total_steps"] = tc.total_steps;
  j["eval_every"] = tc.eval_every;
  j["batch_labeled"] = tc.batch_labeled;
  j["batch_unlabeled"] = tc.batch_unlabeled;
  j["batch_reward"] = tc.batch_reward;
  j["learning_rate"] = tc.learning_rate;
  j["unsup_weight"] = tc.unsup_weight;
  j["reward_ce_mix"] = tc.reward_loss.ce_mix;
  j["score_kind"] =
      tc.reward_loss.score_kind == ScoreKind::logit ? "logit" : "prob";
  j["confidence_threshold"] = tc.pseudo.confidence_threshold;
  j["patience"] = tc.patience;
  j["migration_enabled"] = tc.migration.enabled;
  j["migration_window"] = tc.migration.window;
  j["migration_min_encounters"] = tc.migration.min_encounters;
  j["seed"] = tc.seed;
  return j;
}

ordered_json echo_synth_config(const SynthConfig& sc) {
  ordered_json j;
  j["synth_n_pos"] = sc.n_pos;
  j["synth_n_neg"] = sc.n_neg;
  j["synth_n_unlabeled_pos"] = sc.n_unlabeled_pos;
  j["synth_n_unlabeled_neg"] = sc.n_unlabeled_neg;
  j["synth_n_eval_pos"] = sc.n_eval_pos;
  j["synth_n_eval_neg"] = sc.n_eval_neg;
  j["synth_dim"] = sc.dim;
  j["synth_class_separation"] = sc.class_separation;
  j["synth_noise_ratio"] = sc.noise_ratio;
  j["synth_noise_ratio_pos"] = sc.flip_rate(1);
  j["synth_noise_ratio_neg"] = sc.flip_rate(0);
  j["synth_expert_ratio"] = sc.expert_ratio;
  j["synth_merge_expert_into_crowd"] = sc.merge_expert_into_crowd;
  j["seed"] = sc.seed;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::uint32_t bundle_dim(const DatasetBundle& bundle) {
  std::uint32_t dim = 0;
  auto scan = [&](const std::vector<Instance>& v) {
    for (const Instance& inst : v) {
      if (dim == 0) dim = inst.features.dim;
      if (inst.features.dim != dim) {
        throw std::invalid_argument(
            "inconsistent feature dimensions across dataset files");
      }
    }
  };
  scan(bundle.crowd);
  scan(bundle.unlabeled);
  scan(bundle.reward);
  scan(bundle.eval);
  if (dim == 0) throw std::invalid_argument("dataset is empty");
  return dim;
}

// Content hash of an in-memory dataset in its serialized row format.
std::string bundle_fingerprint(const DatasetBundle& bundle) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto absorb = [&](const std::vector<Instance>& v) {
    for (const Instance& inst : v) {
      h = fnv1a64(inst.id.data(), inst.id.size(), h);
      for (std::size_t k = 0; k < inst.features.nnz(); ++k) {
        const std::uint32_t idx = inst.features.indices[k];
        const double val = inst.features.values[k];
        h = fnv1a64(&idx, sizeof(idx), h);
        h = fnv1a64(&val, sizeof(val), h);
      }
      const int c = inst.crowd_label.value_or(-1);
      const int e = inst.expert_label.value_or(-1);
      h = fnv1a64(&c, sizeof(c), h);
      h = fnv1a64(&e, sizeof(e), h);
    }
  };
  absorb(bundle.crowd);
  absorb(bundle.unlabeled);
  absorb(bundle.reward);
  absorb(bundle.eval);
  char hex[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) hex[15 - i] = digits[(h >> (4 * i)) & 0xf];
  return std::string(hex, 16);
}

std::string history_csv(const TrainHistory& history) {
  std::ostringstream out;
  out << "step,reward_loss,accuracy,f1,bacc,auc,zero_weight_count\n";
  for (const EvalRecord& rec : history.records) {
    out << rec.step << ',' << format_double(rec.reward_loss) << ','
        << format_double(rec.eval.accuracy) << ','
        << format_double(rec.eval.f1) << ','
        << format_double(rec.eval.bacc.value_or(
               std::numeric_limits<double>::quiet_NaN()))
        << ','
        << format_double(rec.eval.auc.value_or(
               std::numeric_limits<double>::quiet_NaN()))
        << ',' << rec.zero_weight_labeled << '\n';
  }
  return out.str();
}

}  // namespace

SynthConfig synth_config_from(const ConfigFile& cfg) {
  SynthConfig sc;
  sc.n_pos = static_cast<std::uint32_t>(cfg.get_uint("synth_n_pos", sc.n_pos));
  sc.n_neg = static_cast<std::uint32_t>(cfg.get_uint("synth_n_neg", sc.n_neg));
  sc.n_unlabeled_pos = static_cast<std::uint32_t>(
      cfg.get_uint("synth_n_unlabeled_pos", sc.n_unlabeled_pos));
  sc.n_unlabeled_neg = static_cast<std::uint32_t>(
      cfg.get_uint("synth_n_unlabeled_neg", sc.n_unlabeled_neg));
  sc.n_eval_pos = static_cast<std::uint32_t>(
      cfg.get_uint("synth_n_eval_pos", sc.n_eval_pos));
  sc.n_eval_neg = static_cast<std::uint32_t>(
      cfg.get_uint("synth_n_eval_neg", sc.n_eval_neg));
  sc.dim = static_cast<std::uint32_t>(cfg.get_uint("synth_dim", sc.dim));
  sc.class_separation =
      cfg.get_double("synth_class_separation", sc.class_separation);
  sc.noise_ratio = cfg.get_double("synth_noise_ratio", sc.noise_ratio);
  if (cfg.has("synth_noise_ratio_pos")) {
    sc.noise_ratio_pos = cfg.get_double("synth_noise_ratio_pos", 0.0);
  }
  if (cfg.has("synth_noise_ratio_neg")) {
    sc.noise_ratio_neg = cfg.get_double("synth_noise_ratio_neg", 0.0);
  }
  sc.expert_ratio = cfg.get_double("synth_expert_ratio", sc.expert_ratio);
  sc.merge_expert_into_crowd =
      cfg.get_bool("synth_merge_expert_into_crowd", sc.merge_expert_into_crowd);
  sc.seed = cfg.get_uint("seed", sc.seed);
  return sc;
}

ModelSpec model_spec_from(const ConfigFile& cfg, std::uint32_t input_dim,
                          std::uint64_t seed) {
  ModelSpec spec;
  const std::string kind = cfg.get_string("model_kind", "linear");
  if (kind == "linear") {
    spec.kind = ModelKind::linear;
  } else if (kind == "one_hidden") {
    spec.kind = ModelKind::one_hidden;
  } else {
    throw std::invalid_argument("model_kind must be linear or one_hidden");
  }
  spec.input_dim = input_dim;
  spec.hidden_dim = static_cast<std::uint32_t>(cfg.get_uint("hidden_dim", 16));
  spec.init_scale = cfg.get_double("init_scale", 0.01);
  spec.seed = seed;
  spec.validate();
  return spec;
}

TrainConfig train_config_from(const ConfigFile& cfg) {
  TrainConfig tc;
  tc.total_steps = cfg.get_uint("total_steps", tc.total_steps);
  tc.eval_every =
      static_cast<std::uint32_t>(cfg.get_uint("eval_every", tc.eval_every));
  tc.batch_labeled = static_cast<std::uint32_t>(
      cfg.get_uint("batch_labeled", tc.batch_labeled));
  tc.batch_unlabeled = static_cast<std::uint32_t>(
      cfg.get_uint("batch_unlabeled", tc.batch_unlabeled));
  tc.batch_reward = static_cast<std::uint32_t>(
      cfg.get_uint("batch_reward", tc.batch_reward));
  tc.learning_rate = cfg.get_double("learning_rate", tc.learning_rate);
  tc.unsup_weight = cfg.get_double("unsup_weight", tc.unsup_weight);
  tc.reward_loss.ce_mix =
      cfg.get_double("reward_ce_mix", tc.reward_loss.ce_mix);
  const std::string sk = cfg.get_string("score_kind", "logit");
  if (sk == "logit") {
    tc.reward_loss.score_kind = ScoreKind::logit;
  } else if (sk == "prob") {
    tc.reward_loss.score_kind = ScoreKind::prob;
  } else {
    throw std::invalid_argument("score_kind must be logit or prob");
  }
  tc.pseudo.confidence_threshold =
      cfg.get_double("confidence_threshold", tc.pseudo.confidence_threshold);
  tc.patience = static_cast<std::uint32_t>(cfg.get_uint("patience", tc.patience));
  tc.migration.enabled =
      cfg.get_bool("migration_enabled", tc.migration.enabled);
  tc.migration.window = static_cast<std::uint32_t>(
      cfg.get_uint("migration_window", tc.migration.window));
  tc.migration.min_encounters = static_cast<std::uint32_t>(
      cfg.get_uint("migration_min_encounters", tc.migration.min_encounters));
  tc.seed = cfg.get_uint("seed", tc.seed);
  tc.method = method_from_name(cfg.get_string("method", "egal"));
  tc.validate();
  return tc;
}

int cmd_synth(const SynthArgs& args) {
  try {
    ConfigFile cfg = ConfigFile::parse_file(args.config_path);
    reject_unknown_keys(cfg);
    SynthConfig sc = synth_config_from(cfg);
    if (args.seed.has_value()) sc.seed = *args.seed;

    const SynthResult result = synth_generate(sc);

    std::filesystem::create_directories(args.out_dir);
    const std::string dir = args.out_dir;
    write_dataset(dir + "/crowd.tsv", result.bundle.crowd, sc.dim);
    write_dataset(dir + "/unlabeled.tsv", result.bundle.unlabeled, sc.dim);
    write_dataset(dir + "/reward.tsv", result.bundle.reward, sc.dim);
    write_dataset(dir + "/eval.tsv", result.bundle.eval, sc.dim);
    write_truth(dir + "/truth.tsv", result.truth);

    ordered_json summary;
    summary["format"] = "reward-sgd-synth-summary-v1";
    summary["config"] = echo_synth_config(sc);
    summary["counts"] =
        ordered_json{{"crowd", result.bundle.crowd.size()},
                     {"unlabeled", result.bundle.unlabeled.size()},
                     {"reward", result.bundle.reward.size()},
                     {"eval", result.bundle.eval.size()}};
    summary["empirical_noise_ratio"] = result.summary.empirical_noise_ratio;
    summary["crowd_imbalance"] = result.summary.crowd_imbalance;
    summary["unlabeled_imbalance"] = result.summary.unlabeled_imbalance;
    summary["reward_imbalance"] = result.summary.reward_imbalance;
    summary["fingerprints"] =
        ordered_json{{"crowd.tsv", file_fingerprint(dir + "/crowd.tsv")},
                     {"unlabeled.tsv", file_fingerprint(dir + "/unlabeled.tsv")},
                     {"reward.tsv", file_fingerprint(dir + "/reward.tsv")},
                     {"eval.tsv", file_fingerprint(dir + "/eval.tsv")}};
    write_text_file(dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << std::endl;
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "synth: " << e.what() << std::endl;
    return kExitUsage;
  }
}

int cmd_train(const TrainArgs& args) {
  DatasetBundle bundle;
  ModelSpec spec;
  TrainConfig tc;
  try {
    ConfigFile cfg = ConfigFile::parse_file(args.config_path);
    reject_unknown_keys(cfg);
    if (args.seed.has_value()) {
      cfg.set("seed", std::to_string(*args.seed));
    }
    if (args.method.has_value()) cfg.set("method", *args.method);

    bundle = load_bundle(args.dataset_dir, featurizer_from(cfg));
    tc = train_config_from(cfg);
    spec = model_spec_from(cfg, bundle_dim(bundle), tc.seed);
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << std::endl;
    return kExitUsage;
  }

  try {
    const TrainResult result = train(bundle, spec, tc);
    if (result.history.sampler_fell_back) {
      std::cerr << "train: warning: a batch size exceeds its dataset; "
                   "sampling fell back to replacement"
                << std::endl;
    }
    const MetricsReport metrics = evaluate(spec, result.params, bundle.eval);

    std::filesystem::create_directories(args.out_dir);
    write_checkpoint(args.out_dir + "/checkpoint.txt",
                     Checkpoint{spec, result.params});
    write_text_file(args.out_dir + "/history.csv",
                    history_csv(result.history));

    ordered_json report;
    report["format"] = "reward-sgd-report-v1";
    report["config"] = echo_train_config(tc, spec);
    report["dataset"] = ordered_json{{"crowd", bundle.crowd.size()},
                                     {"unlabeled", bundle.unlabeled.size()},
                                     {"reward", bundle.reward.size()},
                                     {"eval", bundle.eval.size()},
                                     {"fingerprint", bundle_fingerprint(bundle)}};
    report["steps_run"] = result.history.steps_run;
    report["best_step"] = result.history.best_step;
    report["stopped_early"] = result.history.stopped_early;
    report["aborted"] = result.history.aborted;
    if (result.history.aborted) {
      report["abort_reason"] = result.history.abort_reason;
    }
    report["migrated_total"] = result.history.migrated_total;
    report["sampler_fell_back"] = result.history.sampler_fell_back;
    report["metrics"] = json_metrics(metrics);
    if (!result.history.records.empty()) {
      report["reward_loss_final"] =
          std::isnan(result.history.records.back().reward_loss)
              ? ordered_json(nullptr)
              : ordered_json(result.history.records.back().reward_loss);
    } else {
      report["reward_loss_final"] = nullptr;
    }
    write_text_file(args.out_dir + "/report.json", report.dump(2) + "\n");

    std::cout << json_metrics(metrics).dump(2) << std::endl;
    return result.history.aborted ? kExitTrainFail : kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << std::endl;
    return kExitTrainFail;
  }
}

namespace {

struct GridSpec {
  std::string kind;  // lambda | gamma | rho
  std::vector<double> values;
};

GridSpec parse_grid(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument(
        "grid must look like lambda=0.1,0.3 (or gamma=..., rho=...)");
  }
  GridSpec grid;
  grid.kind = text.substr(0, eq);
  if (grid.kind != "lambda" && grid.kind != "gamma" && grid.kind != "rho") {
    throw std::invalid_argument("grid kind must be lambda, gamma or rho");
  }
  std::string rest = text.substr(eq + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    grid.values.push_back(parse_double(rest.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (grid.values.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

SynthConfig apply_grid_point(SynthConfig sc, const std::string& kind,
                             double value) {
  if (kind == "lambda") {
    sc.expert_ratio = value;
  } else if (kind == "gamma") {
    if (!(value >= 1.0)) {
      throw std::invalid_argument("gamma grid values must be >= 1");
    }
    // Imbalance is imposed by shrinking the positive class: n_pos = n_neg/gamma.
    sc.n_pos = static_cast<std::uint32_t>(std::llround(
        static_cast<double>(sc.n_neg) / value));
    if (sc.n_pos == 0) {
      throw std::invalid_argument("gamma grid value leaves no positives");
    }
  } else {
    sc.noise_ratio = value;
  }
  return sc;
}

}  // namespace

int cmd_sweep(const SweepArgs& args) {
  GridSpec grid;
  ConfigFile cfg;
  SynthConfig base;
  try {
    grid = parse_grid(args.grid);
    cfg = ConfigFile::parse_file(args.config_path);
    reject_unknown_keys(cfg);
    base = synth_config_from(cfg);
    if (args.seeds.empty()) {
      throw std::invalid_argument("sweep needs at least one seed");
    }
    std::filesystem::create_directories(args.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << std::endl;
    return kExitUsage;
  }

  static const Method kMethods[] = {Method::egal, Method::supervised,
                                    Method::uniform_ssl};
  static const char* kMetricNames[] = {"accuracy", "f1", "bacc", "auc"};

  ordered_json runs = ordered_json::array();
  ordered_json failures = ordered_json::array();
  std::ostringstream csv;
  csv << "method,grid_value,seed,metric,value\n";

  // (method, grid_value) -> metric -> per-seed values
  std::map<std::pair<std::string, double>,
           std::map<std::string, std::vector<double>>>
      groups;

  std::size_t successes = 0;
  for (double value : grid.values) {
    for (std::uint64_t seed : args.seeds) {
      SynthResult data;
      std::string fingerprint;
      bool data_ok = true;
      try {
        SynthConfig sc = apply_grid_point(base, grid.kind, value);
        sc.seed = seed;
        data = synth_generate(sc);
        fingerprint = bundle_fingerprint(data.bundle);
      } catch (const std::exception& e) {
        data_ok = false;
        for (Method method : kMethods) {
          failures.push_back(ordered_json{{"method", method_name(method)},
                                          {"grid_value", value},
                                          {"seed", seed},
                                          {"error", e.what()}});
        }
      }
      if (!data_ok) continue;

      for (Method method : kMethods) {
        try {
          TrainConfig tc = train_config_from(cfg);
          tc.seed = seed;
          tc.method = method;
          ModelSpec spec = model_spec_from(cfg, bundle_dim(data.bundle), seed);
          const TrainResult result = train(data.bundle, spec, tc);
          if (result.history.aborted) {
            throw std::runtime_error("training aborted: " +
                                     result.history.abort_reason);
          }
          const MetricsReport metrics =
              evaluate(spec, result.params, data.bundle.eval);

          ordered_json run;
          run["method"] = method_name(method);
          run["grid_value"] = value;
          run["seed"] = seed;
          run["dataset_fingerprint"] = fingerprint;
          run["best_step"] = result.history.best_step;
          run["metrics"] = json_metrics(metrics);
          runs.push_back(std::move(run));

          const double metric_values[] = {
              metrics.accuracy, metrics.f1,
              metrics.bacc.value_or(std::numeric_limits<double>::quiet_NaN()),
              metrics.auc.value_or(std::numeric_limits<double>::quiet_NaN())};
          for (std::size_t k = 0; k < 4; ++k) {
            csv << method_name(method) << ',' << format_double(value) << ','
                << seed << ',' << kMetricNames[k] << ','
                << format_double(metric_values[k]) << '\n';
            groups[{method_name(method), value}][kMetricNames[k]].push_back(
                metric_values[k]);
          }
          ++successes;
        } catch (const std::exception& e) {
          failures.push_back(ordered_json{{"method", method_name(method)},
                                          {"grid_value", value},
                                          {"seed", seed},
                                          {"error", e.what()}});
        }
      }
    }
  }

  ordered_json aggregates = ordered_json::array();
  for (double value : grid.values) {
    for (Method method : kMethods) {
      const auto it = groups.find({method_name(method), value});
      if (it == groups.end()) continue;
      for (const char* metric : kMetricNames) {
        const std::vector<double>& xs = it->second[metric];
        if (xs.empty()) continue;
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size());  // population variance
        aggregates.push_back(ordered_json{{"method", method_name(method)},
                                          {"grid_value", value},
                                          {"metric", metric},
                                          {"mean", mean},
                                          {"std", std::sqrt(var)}});
      }
    }
  }

  ordered_json manifest;
  manifest["format"] = "reward-sgd-manifest-v1";
  manifest["grid"] = ordered_json{{"kind", grid.kind},
                                  {"values", grid.values}};
  manifest["seeds"] = args.seeds;
  manifest["base_config"] = echo_synth_config(base);
  {
    ordered_json train_echo;
    for (const auto& [key, val] : cfg.entries()) train_echo[key] = val;
    manifest["config_file"] = train_echo;
  }
  manifest["runs"] = runs;
  manifest["aggregates"] = aggregates;
  manifest["failures"] = failures;
  manifest["failure_count"] = failures.size();

  try {
    write_text_file(args.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    write_text_file(args.out_dir + "/results.csv", csv.str());
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << std::endl;
    return kExitUsage;
  }

  std::cerr << "sweep: " << successes << " runs succeeded, "
            << failures.size() << " failed" << std::endl;
  return successes > 0 ? kExitOk : kExitTrainFail;
}

int cmd_eval(const EvalArgs& args) {
  Checkpoint ckpt;
  try {
    ckpt = read_checkpoint(args.checkpoint_path);
  } catch (const CheckpointVersionError& e) {
    std::cerr << "eval: " << e.what() << std::endl;
    return kExitCkptMismatch;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << std::endl;
    return kExitUsage;
  }

  try {
    const std::vector<Instance> instances =
        read_dataset(args.dataset_path, DatasetRole::eval);
    const MetricsReport metrics =
        evaluate(ckpt.spec, ckpt.params, instances, args.decision_threshold);
    std::cout << json_metrics(metrics).dump(2) << std::endl;
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "eval: " << e.what() << std::endl;
    return kExitUsage;
  }
}

}  // namespace rsgd::cli
