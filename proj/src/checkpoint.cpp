#include "rsgd/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "rsgd/dataset_io.hpp"

namespace rsgd {

namespace {

constexpr const char* kCheckpointTag = "# reward-sgd checkpoint v1";

std::string expect_kv(std::ifstream& in, const std::string& key,
                      const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": truncated checkpoint (missing " + key +
                             ")");
  }
  const std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0) {
    throw std::runtime_error(path + ": expected '" + key + "=', got '" + line +
                             "'");
  }
  return line.substr(prefix.size());
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << kCheckpointTag << '\n';
  out << "kind="
      << (ckpt.spec.kind == ModelKind::linear ? "linear" : "one_hidden")
      << '\n';
  out << "input_dim=" << ckpt.spec.input_dim << '\n';
  out << "hidden_dim=" << ckpt.spec.hidden_dim << '\n';
  out << "activation=tanh\n";
  out << "init_scale=" << format_double(ckpt.spec.init_scale) << '\n';
  out << "seed=" << ckpt.spec.seed << '\n';
  out << "param_count=" << ckpt.params.size() << '\n';
  for (double v : ckpt.params.values) {
    out << format_double(v) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::string tag;
  if (!std::getline(in, tag) || tag != kCheckpointTag) {
    throw CheckpointVersionError(path +
                                 ": checkpoint format version mismatch");
  }

  Checkpoint ckpt;
  const std::string kind = expect_kv(in, "kind", path);
  if (kind == "linear") {
    ckpt.spec.kind = ModelKind::linear;
  } else if (kind == "one_hidden") {
    ckpt.spec.kind = ModelKind::one_hidden;
  } else {
    throw std::runtime_error(path + ": unknown model kind '" + kind + "'");
  }
  ckpt.spec.input_dim =
      static_cast<std::uint32_t>(std::stoul(expect_kv(in, "input_dim", path)));
  ckpt.spec.hidden_dim = static_cast<std::uint32_t>(
      std::stoul(expect_kv(in, "hidden_dim", path)));
  const std::string act = expect_kv(in, "activation", path);
  if (act != "tanh") {
    throw std::runtime_error(path + ": unsupported activation '" + act + "'");
  }
  ckpt.spec.init_scale = parse_double(expect_kv(in, "init_scale", path));
  ckpt.spec.seed = std::stoull(expect_kv(in, "seed", path));
  const std::size_t count = std::stoull(expect_kv(in, "param_count", path));
  if (count != param_count(ckpt.spec)) {
    throw std::runtime_error(path + ": param_count " + std::to_string(count) +
                             " does not match the model spec");
  }
  ckpt.params.values.reserve(count);
  std::string line;
  while (ckpt.params.size() < count && std::getline(in, line)) {
    ckpt.params.values.push_back(parse_double(line));
  }
  if (ckpt.params.size() != count) {
    throw std::runtime_error(path + ": truncated parameter block");
  }
  return ckpt;
}

}  // namespace rsgd
