#include "rsgd/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>
#include <unordered_set>

#include "rsgd/rng.hpp"

namespace rsgd {

namespace {

constexpr const char* kDatasetTag = "# reward-sgd dataset v1";
constexpr const char* kTruthTag = "# reward-sgd truth v1";

[[noreturn]] void fail_at(const std::string& path, std::size_t line,
                          const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

int parse_label(const std::string& path, std::size_t line,
                const std::string& value) {
  if (value == "0") return 0;
  if (value == "1") return 1;
  fail_at(path, line, "label must be 0 or 1, got '" + value + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed real number '" + text + "'");
  }
  return v;
}

const char* dataset_role_name(DatasetRole role) {
  switch (role) {
    case DatasetRole::crowd: return "crowd";
    case DatasetRole::unlabeled: return "unlabeled";
    case DatasetRole::reward: return "reward";
    case DatasetRole::eval: return "eval";
  }
  return "unknown";
}

void write_dataset(const std::string& path,
                   const std::vector<Instance>& instances, std::uint32_t dim) {
  std::ofstream out = open_out(path);
  out << kDatasetTag << "\n# dim=" << dim << "\n";
  for (const Instance& inst : instances) {
    if (inst.id.find_first_of("\t\n") != std::string::npos) {
      throw std::invalid_argument("instance id contains tab or newline");
    }
    out << inst.id;
    if (inst.features.nnz() > 0 || inst.raw_text.empty()) {
      out << "\tfeatures=";
      for (std::size_t k = 0; k < inst.features.nnz(); ++k) {
        if (k > 0) out << ',';
        out << inst.features.indices[k] << ':'
            << format_double(inst.features.values[k]);
      }
    } else {
      if (inst.raw_text.find_first_of("\t\n") != std::string::npos) {
        throw std::invalid_argument("instance text contains tab or newline");
      }
      out << "\ttext=" << inst.raw_text;
    }
    if (inst.crowd_label.has_value()) out << "\tcrowd=" << *inst.crowd_label;
    if (inst.expert_label.has_value()) {
      out << "\texpert=" << *inst.expert_label;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<Instance> read_dataset(
    const std::string& path, DatasetRole role,
    const std::optional<HashFeaturizerConfig>& featurizer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<Instance> out;
  std::unordered_set<std::string> seen_ids;
  std::optional<std::uint32_t> header_dim;
  std::string line;
  std::size_t lineno = 0;
  bool tagged = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (lineno == 1 && line == kDatasetTag) tagged = true;
      if (line.rfind("# dim=", 0) == 0) {
        try {
          header_dim = static_cast<std::uint32_t>(
              std::stoul(line.substr(6)));
        } catch (const std::exception&) {
          fail_at(path, lineno, "malformed dim header");
        }
      }
      continue;
    }
    if (!tagged) fail_at(path, 1, "missing dataset format tag");

    const auto fields = split_tabs(line);
    Instance inst;
    inst.id = fields[0];
    if (inst.id.empty()) fail_at(path, lineno, "empty instance id");
    if (!seen_ids.insert(inst.id).second) {
      fail_at(path, lineno, "duplicate instance id '" + inst.id + "'");
    }

    bool have_payload = false;
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const std::string& field = fields[f];
      if (field.rfind("features=", 0) == 0) {
        if (have_payload) fail_at(path, lineno, "multiple payload fields");
        have_payload = true;
        if (!header_dim.has_value()) {
          fail_at(path, lineno, "feature record without a dim header");
        }
        inst.features.dim = *header_dim;
        const std::string body = field.substr(9);
        std::size_t pos = 0;
        while (pos < body.size()) {
          std::size_t comma = body.find(',', pos);
          if (comma == std::string::npos) comma = body.size();
          const std::string pair = body.substr(pos, comma - pos);
          const std::size_t colon = pair.find(':');
          if (colon == std::string::npos) {
            fail_at(path, lineno, "malformed feature pair '" + pair + "'");
          }
          try {
            inst.features.indices.push_back(static_cast<std::uint32_t>(
                std::stoul(pair.substr(0, colon))));
            inst.features.values.push_back(
                parse_double(pair.substr(colon + 1)));
          } catch (const std::exception& e) {
            fail_at(path, lineno,
                    "malformed feature pair '" + pair + "': " + e.what());
          }
          pos = comma + 1;
        }
        try {
          inst.features.validate();
        } catch (const std::exception& e) {
          fail_at(path, lineno, e.what());
        }
      } else if (field.rfind("text=", 0) == 0) {
        if (have_payload) fail_at(path, lineno, "multiple payload fields");
        have_payload = true;
        inst.raw_text = field.substr(5);
        if (!featurizer.has_value()) {
          fail_at(path, lineno,
                  "text record requires a featurizer configuration");
        }
        inst.features = hash_features(inst.raw_text, *featurizer).features;
      } else if (field.rfind("crowd=", 0) == 0) {
        inst.crowd_label = parse_label(path, lineno, field.substr(6));
      } else if (field.rfind("expert=", 0) == 0) {
        inst.expert_label = parse_label(path, lineno, field.substr(7));
      } else {
        fail_at(path, lineno, "unknown field '" + field + "'");
      }
    }
    if (!have_payload) fail_at(path, lineno, "record has no payload field");

    switch (role) {
      case DatasetRole::crowd:
        if (!inst.crowd_label.has_value()) {
          fail_at(path, lineno, "crowd record lacks a crowd label");
        }
        break;
      case DatasetRole::unlabeled:
        if (inst.crowd_label.has_value() || inst.expert_label.has_value()) {
          fail_at(path, lineno, "unlabeled record must not carry labels");
        }
        break;
      case DatasetRole::reward:
      case DatasetRole::eval:
        if (!inst.expert_label.has_value()) {
          fail_at(path, lineno,
                  std::string(dataset_role_name(role)) +
                      " record lacks an expert label");
        }
        break;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

void write_truth(const std::string& path, const TruthOracle& truth) {
  std::ofstream out = open_out(path);
  out << kTruthTag << '\n';
  for (const auto& [id, label] : truth.labels) {
    out << id << '\t' << label << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

TruthOracle read_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  TruthOracle truth;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2) fail_at(path, lineno, "expected id and label");
    truth.labels[fields[0]] = parse_label(path, lineno, fields[1]);
  }
  return truth;
}

DatasetBundle load_bundle(
    const std::string& dir,
    const std::optional<HashFeaturizerConfig>& featurizer) {
  DatasetBundle bundle;
  bundle.crowd = read_dataset(dir + "/crowd.tsv", DatasetRole::crowd,
                              featurizer);
  bundle.unlabeled = read_dataset(dir + "/unlabeled.tsv",
                                  DatasetRole::unlabeled, featurizer);
  bundle.reward = read_dataset(dir + "/reward.tsv", DatasetRole::reward,
                               featurizer);
  bundle.eval = read_dataset(dir + "/eval.tsv", DatasetRole::eval, featurizer);
  return bundle;
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    if (!in) break;
  }
  char hex[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) {
    hex[15 - i] = digits[(h >> (4 * i)) & 0xf];
  }
  hex[16] = '\0';
  return std::string(hex);
}

}  // namespace rsgd
