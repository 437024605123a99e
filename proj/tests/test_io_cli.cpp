#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rsgd/checkpoint.hpp"
#include "rsgd/cli.hpp"
#include "rsgd/config_file.hpp"
#include "rsgd/dataset_io.hpp"
#include "rsgd/metrics.hpp"
#include "testutil.hpp"

using namespace rsgd;
namespace fs = std::filesystem;
using testutil::make_instance;

namespace {

fs::path test_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "rsgd_io_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::size_t data_lines(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++count;
  }
  return count;
}

// Runs fn with std::cout captured; returns what it printed.
template <class F>
std::string capture_stdout(F&& fn, int& exit_code) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  exit_code = fn();
  std::cout.rdbuf(old);
  return captured.str();
}

const char* kSynthCfg =
    "synth_n_pos=120\n"
    "synth_n_neg=240\n"
    "synth_n_unlabeled_pos=40\n"
    "synth_n_unlabeled_neg=200\n"
    "synth_n_eval_pos=60\n"
    "synth_n_eval_neg=120\n"
    "synth_dim=6\n"
    "synth_class_separation=5.0\n"
    "synth_noise_ratio=0.1\n"
    "synth_expert_ratio=0.2\n"
    "seed=5\n";

const char* kTrainCfg =
    "total_steps=512\n"
    "eval_every=128\n"
    "batch_labeled=16\n"
    "batch_unlabeled=16\n"
    "batch_reward=6\n"
    "learning_rate=0.1\n"
    "patience=100\n"
    "method=supervised\n"
    "seed=5\n";

}  // namespace

TEST_CASE("dataset files round-trip instances exactly") {
  const fs::path dir = test_root() / "roundtrip";
  fs::create_directories(dir);

  std::vector<Instance> insts;
  Rng rng(3);
  for (int i = 0; i < 25; ++i) {
    std::vector<double> vals = {rng.normal() * 1e-3, rng.normal() * 1e3,
                                rng.normal()};
    insts.push_back(make_instance("row" + std::to_string(i), vals,
                                  static_cast<int>(rng.bounded(2)),
                                  static_cast<int>(rng.bounded(2))));
  }
  const std::string path = (dir / "crowd.tsv").string();
  write_dataset(path, insts, 3);
  const auto back = read_dataset(path, DatasetRole::crowd);

  REQUIRE(back.size() == insts.size());
  for (std::size_t i = 0; i < insts.size(); ++i) {
    CHECK(back[i].id == insts[i].id);
    CHECK(back[i].features.indices == insts[i].features.indices);
    CHECK(back[i].features.values == insts[i].features.values);  // bit-exact
    CHECK(back[i].crowd_label == insts[i].crowd_label);
    CHECK(back[i].expert_label == insts[i].expert_label);
  }
}

TEST_CASE("text records are hashed at load time") {
  const fs::path dir = test_root() / "text";
  fs::create_directories(dir);
  const std::string path = (dir / "eval.tsv").string();
  spit(path,
       "# reward-sgd dataset v1\n"
       "t0\ttext=food poisoning is awful\texpert=1\n"
       "t1\ttext=great dinner tonight\texpert=0\n");

  HashFeaturizerConfig fc;
  fc.dimension = 1u << 8;
  const auto insts = read_dataset(path, DatasetRole::eval, fc);
  REQUIRE(insts.size() == 2);
  CHECK(insts[0].features.nnz() > 0);
  CHECK(insts[0].features.dim == fc.dimension);
  CHECK(insts[0].raw_text == "food poisoning is awful");

  // missing featurizer names the file and line
  CHECK_THROWS_WITH_AS(read_dataset(path, DatasetRole::eval),
                       doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("parse failures name file and line") {
  const fs::path dir = test_root() / "bad";
  fs::create_directories(dir);
  const auto check_fails = [&](const char* name, const std::string& body,
                               const char* needle) {
    const std::string path = (dir / name).string();
    spit(path, std::string("# reward-sgd dataset v1\n# dim=4\n") + body);
    CHECK_THROWS_WITH_AS(read_dataset(path, DatasetRole::crowd),
                         doctest::Contains(needle), std::runtime_error);
  };
  check_fails("label.tsv", "a\tfeatures=0:1\tcrowd=2\n", "label");
  check_fails("dup.tsv",
              "a\tfeatures=0:1\tcrowd=1\na\tfeatures=1:1\tcrowd=0\n",
              "duplicate");
  check_fails("field.tsv", "a\tfeatures=0:1\tbogus=1\n", "unknown field");
  check_fails("payload.tsv", "a\tcrowd=1\n", "payload");
  check_fails("order.tsv", "a\tfeatures=3:1,1:2\tcrowd=1\n", "increasing");
  check_fails("missing.tsv", "a\tfeatures=0:1\n", "crowd label");

  const std::string untagged = (dir / "untagged.tsv").string();
  spit(untagged, "a\tfeatures=0:1\tcrowd=1\n");
  CHECK_THROWS_WITH_AS(read_dataset(untagged, DatasetRole::crowd),
                       doctest::Contains("format tag"), std::runtime_error);

  const std::string unl = (dir / "unlabeled.tsv").string();
  spit(unl, "# reward-sgd dataset v1\n# dim=4\nu0\tfeatures=0:1\tcrowd=1\n");
  CHECK_THROWS_WITH_AS(read_dataset(unl, DatasetRole::unlabeled),
                       doctest::Contains("must not carry labels"),
                       std::runtime_error);
}

TEST_CASE("truth files round-trip") {
  const fs::path dir = test_root() / "truth";
  fs::create_directories(dir);
  TruthOracle truth;
  truth.labels = {{"u1", 1}, {"u2", 0}, {"u3", 1}};
  const std::string path = (dir / "truth.tsv").string();
  write_truth(path, truth);
  CHECK(read_truth(path).labels == truth.labels);
}

TEST_CASE("checkpoints round-trip bit-exactly and version-check") {
  const fs::path dir = test_root() / "ckpt";
  fs::create_directories(dir);

  ModelSpec spec;
  spec.kind = ModelKind::one_hidden;
  spec.input_dim = 7;
  spec.hidden_dim = 3;
  spec.init_scale = 0.05;
  spec.seed = 9;
  Checkpoint ckpt{spec, init_params(spec)};

  const std::string path = (dir / "model.ckpt").string();
  write_checkpoint(path, ckpt);
  const Checkpoint back = read_checkpoint(path);
  CHECK(back.spec.kind == spec.kind);
  CHECK(back.spec.input_dim == spec.input_dim);
  CHECK(back.spec.hidden_dim == spec.hidden_dim);
  CHECK(back.params.values == ckpt.params.values);  // bit-exact

  // legacy or foreign version tags are a distinct error type
  const std::string badpath = (dir / "old.ckpt").string();
  spit(badpath, "# reward-sgd checkpoint v0\nkind=linear\n");
  CHECK_THROWS_AS(read_checkpoint(badpath), CheckpointVersionError);

  const std::string shortpath = (dir / "short.ckpt").string();
  std::string content = slurp(path);
  spit(shortpath, content.substr(0, content.size() / 2));
  CHECK_THROWS_AS(read_checkpoint(shortpath), std::runtime_error);
}

TEST_CASE("config files parse comments, blanks and typed values") {
  const ConfigFile cfg = ConfigFile::parse_string(
      "# a comment\n"
      "\n"
      "  learning_rate = 0.25  \n"
      "method=egal\n"
      "patience=7\n"
      "migration_enabled=true\n",
      "inline");
  CHECK(cfg.get_double("learning_rate", 0.0) == 0.25);
  CHECK(cfg.get_string("method", "") == "egal");
  CHECK(cfg.get_uint("patience", 0) == 7);
  CHECK(cfg.get_bool("migration_enabled", false));
  CHECK(cfg.get_double("absent", 1.5) == 1.5);

  CHECK_THROWS_AS(cfg.get_uint("learning_rate", 0), std::invalid_argument);
  CHECK_THROWS_AS(ConfigFile::parse_string("novalue\n", "inline"),
                  std::runtime_error);
}

TEST_CASE("cmd_synth writes the dataset family deterministically") {
  const fs::path dir = test_root() / "synth";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "synth.cfg").string();
  spit(cfg_path, kSynthCfg);

  cli::SynthArgs args;
  args.config_path = cfg_path;
  args.out_dir = (dir / "out_a").string();
  int code = 0;
  capture_stdout([&] { return cli::cmd_synth(args); }, code);
  CHECK(code == cli::kExitOk);

  CHECK(data_lines(dir / "out_a/crowd.tsv") == 360);
  CHECK(data_lines(dir / "out_a/unlabeled.tsv") == 240);
  CHECK(data_lines(dir / "out_a/reward.tsv") == 72);  // round(0.2 * 360)
  CHECK(data_lines(dir / "out_a/eval.tsv") == 180);
  CHECK(data_lines(dir / "out_a/truth.tsv") == 240);

  args.out_dir = (dir / "out_b").string();
  capture_stdout([&] { return cli::cmd_synth(args); }, code);
  CHECK(code == cli::kExitOk);
  for (const char* name :
       {"crowd.tsv", "unlabeled.tsv", "reward.tsv", "eval.tsv", "truth.tsv",
        "summary.json"}) {
    CHECK(slurp(dir / "out_a" / name) == slurp(dir / "out_b" / name));
  }

  const auto summary = nlohmann::json::parse(slurp(dir / "out_a/summary.json"));
  const double rho = summary["empirical_noise_ratio"].get<double>();
  CHECK(std::fabs(rho - 0.1) <= 3.0 * std::sqrt(0.1 * 0.9 / 360.0));

  // unknown keys are rejected
  spit(cfg_path, std::string(kSynthCfg) + "synht_n_pos=3\n");
  capture_stdout([&] { return cli::cmd_synth(args); }, code);
  CHECK(code == cli::kExitUsage);
}

TEST_CASE("cmd_train end to end: reports, reruns, zero steps, eval parity") {
  const fs::path dir = test_root() / "train";
  fs::create_directories(dir);
  const std::string synth_cfg = (dir / "synth.cfg").string();
  spit(synth_cfg, kSynthCfg);

  cli::SynthArgs synth_args;
  synth_args.config_path = synth_cfg;
  synth_args.out_dir = (dir / "data").string();
  int code = 0;
  capture_stdout([&] { return cli::cmd_synth(synth_args); }, code);
  REQUIRE(code == cli::kExitOk);

  const std::string train_cfg = (dir / "train.cfg").string();
  spit(train_cfg, kTrainCfg);

  cli::TrainArgs train_args;
  train_args.dataset_dir = (dir / "data").string();
  train_args.config_path = train_cfg;
  train_args.out_dir = (dir / "run_a").string();
  const std::string out_a =
      capture_stdout([&] { return cli::cmd_train(train_args); }, code);
  REQUIRE(code == cli::kExitOk);

  // clean-ish separable data: supervised convergence oracle
  const auto report = nlohmann::json::parse(slurp(dir / "run_a/report.json"));
  CHECK(report["metrics"]["bacc"].get<double>() >= 0.95);
  CHECK(report["config"]["method"] == "supervised");

  // byte-identical rerun
  train_args.out_dir = (dir / "run_b").string();
  capture_stdout([&] { return cli::cmd_train(train_args); }, code);
  REQUIRE(code == cli::kExitOk);
  CHECK(slurp(dir / "run_a/report.json") == slurp(dir / "run_b/report.json"));
  CHECK(slurp(dir / "run_a/history.csv") == slurp(dir / "run_b/history.csv"));
  CHECK(slurp(dir / "run_a/checkpoint.txt") ==
        slurp(dir / "run_b/checkpoint.txt"));

  // eval on the eval split reproduces the report metrics exactly
  cli::EvalArgs eval_args;
  eval_args.checkpoint_path = (dir / "run_a/checkpoint.txt").string();
  eval_args.dataset_path = (dir / "data/eval.tsv").string();
  const std::string eval_out =
      capture_stdout([&] { return cli::cmd_eval(eval_args); }, code);
  REQUIRE(code == cli::kExitOk);
  const auto eval_json = nlohmann::json::parse(eval_out);
  CHECK(eval_json["accuracy"] == report["metrics"]["accuracy"]);
  CHECK(eval_json["bacc"] == report["metrics"]["bacc"]);
  CHECK(eval_json["auc"] == report["metrics"]["auc"]);

  // permuted rows leave the metrics unchanged
  {
    std::ifstream in(dir / "data/eval.tsv");
    std::string line;
    std::vector<std::string> headers, rows;
    while (std::getline(in, line)) {
      (line.rfind('#', 0) == 0 ? headers : rows).push_back(line);
    }
    std::reverse(rows.begin(), rows.end());
    std::ostringstream body;
    for (const auto& h : headers) body << h << '\n';
    for (const auto& r : rows) body << r << '\n';
    spit(dir / "data/eval_permuted.tsv", body.str());
  }
  eval_args.dataset_path = (dir / "data/eval_permuted.tsv").string();
  const std::string permuted_out =
      capture_stdout([&] { return cli::cmd_eval(eval_args); }, code);
  REQUIRE(code == cli::kExitOk);
  CHECK(permuted_out == eval_out);

  // zero training steps: the report evaluates the initialized model
  spit(train_cfg, std::string(kTrainCfg) + "total_steps=0\n");
  train_args.out_dir = (dir / "run_zero").string();
  capture_stdout([&] { return cli::cmd_train(train_args); }, code);
  REQUIRE(code == cli::kExitOk);
  const auto zero_report =
      nlohmann::json::parse(slurp(dir / "run_zero/report.json"));
  const Checkpoint init_ckpt =
      read_checkpoint((dir / "run_zero/checkpoint.txt").string());
  CHECK(init_ckpt.params.values ==
        init_params(init_ckpt.spec).values);
  CHECK(zero_report["steps_run"] == 0);
}

TEST_CASE("cmd_eval failure modes") {
  const fs::path dir = test_root() / "evalfail";
  fs::create_directories(dir);

  // version mismatch -> dedicated exit code
  spit(dir / "old.ckpt", "# reward-sgd checkpoint v9\n");
  cli::EvalArgs args;
  args.checkpoint_path = (dir / "old.ckpt").string();
  args.dataset_path = (dir / "eval.tsv").string();
  int code = 0;
  capture_stdout([&] { return cli::cmd_eval(args); }, code);
  CHECK(code == cli::kExitCkptMismatch);

  // empty dataset -> usage error
  ModelSpec spec;
  spec.kind = ModelKind::linear;
  spec.input_dim = 2;
  spec.seed = 1;
  write_checkpoint((dir / "good.ckpt").string(),
                   Checkpoint{spec, init_params(spec)});
  spit(dir / "eval.tsv", "# reward-sgd dataset v1\n# dim=2\n");
  args.checkpoint_path = (dir / "good.ckpt").string();
  capture_stdout([&] { return cli::cmd_eval(args); }, code);
  CHECK(code == cli::kExitUsage);
}

TEST_CASE("cmd_sweep manifests, row counts, aggregates and failures") {
  const fs::path dir = test_root() / "sweep";
  fs::create_directories(dir);
  const std::string cfg_path = (dir / "base.cfg").string();
  spit(cfg_path, std::string(kSynthCfg) +
                     "total_steps=128\n"
                     "eval_every=64\n"
                     "batch_labeled=8\n"
                     "batch_unlabeled=8\n"
                     "batch_reward=4\n"
                     "learning_rate=0.1\n");

  cli::SweepArgs args;
  args.grid = "gamma=2,4";
  args.config_path = cfg_path;
  args.out_dir = (dir / "out").string();
  args.seeds = {1, 2};
  int code = 0;
  capture_stdout([&] { return cli::cmd_sweep(args); }, code);
  REQUIRE(code == cli::kExitOk);

  // 2 grid points x 2 seeds x 3 methods x 4 metrics
  CHECK(data_lines(dir / "out/results.csv") == 1 + 48);

  const auto manifest = nlohmann::json::parse(slurp(dir / "out/manifest.json"));
  CHECK(manifest["failure_count"] == 0);
  CHECK(manifest["runs"].size() == 12);

  // aggregates are recomputable from the per-seed rows
  for (const auto& agg : manifest["aggregates"]) {
    std::vector<double> xs;
    for (const auto& run : manifest["runs"]) {
      if (run["method"] == agg["method"] &&
          run["grid_value"] == agg["grid_value"]) {
        xs.push_back(run["metrics"][agg["metric"].get<std::string>()]
                         .get<double>());
      }
    }
    REQUIRE(xs.size() == 2);
    const double mean = (xs[0] + xs[1]) / 2.0;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= 2.0;
    CHECK(std::fabs(agg["mean"].get<double>() - mean) <= 1e-12);
    CHECK(std::fabs(agg["std"].get<double>() - std::sqrt(var)) <= 1e-12);
  }

  // single-point single-seed: aggregate equals the run, std is zero
  args.grid = "lambda=0.2";
  args.seeds = {3};
  args.out_dir = (dir / "single").string();
  capture_stdout([&] { return cli::cmd_sweep(args); }, code);
  REQUIRE(code == cli::kExitOk);
  const auto single = nlohmann::json::parse(slurp(dir / "single/manifest.json"));
  REQUIRE(single["runs"].size() == 3);
  for (const auto& agg : single["aggregates"]) {
    CHECK(agg["std"].get<double>() == 0.0);
  }

  // reproducibility of the whole manifest
  args.out_dir = (dir / "single_again").string();
  capture_stdout([&] { return cli::cmd_sweep(args); }, code);
  CHECK(slurp(dir / "single/manifest.json") ==
        slurp(dir / "single_again/manifest.json"));
  CHECK(slurp(dir / "single/results.csv") ==
        slurp(dir / "single_again/results.csv"));

  // a failing grid point is recorded and skipped, exit stays zero
  args.grid = "gamma=2,100000";  // second point leaves no positives
  args.seeds = {1};
  args.out_dir = (dir / "fail").string();
  capture_stdout([&] { return cli::cmd_sweep(args); }, code);
  CHECK(code == cli::kExitOk);
  const auto failing = nlohmann::json::parse(slurp(dir / "fail/manifest.json"));
  CHECK(failing["failure_count"].get<int>() == 3);
  CHECK(failing["runs"].size() == 3);
}
