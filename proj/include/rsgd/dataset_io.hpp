#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rsgd/featurize.hpp"
#include "rsgd/instance.hpp"

namespace rsgd {

// Line-delimited UTF-8 records, tab-separated fields. The first field is
// the id; the rest are key=value fields: features=i:v,i:v,...  text=...
// crowd=0|1  expert=0|1. Header comments carry the format tag and the
// feature dimension. Byte-identical output for identical input.

enum class DatasetRole { crowd, unlabeled, reward, eval };

const char* dataset_role_name(DatasetRole role);

void write_dataset(const std::string& path,
                   const std::vector<Instance>& instances,
                   std::uint32_t dim);

// Text records require a featurizer config; parse errors name file and
// line. Role-specific label requirements are enforced.
std::vector<Instance> read_dataset(
    const std::string& path, DatasetRole role,
    const std::optional<HashFeaturizerConfig>& featurizer = std::nullopt);

void write_truth(const std::string& path, const TruthOracle& truth);
TruthOracle read_truth(const std::string& path);

// Loads crowd.tsv / unlabeled.tsv / reward.tsv / eval.tsv from a directory.
DatasetBundle load_bundle(
    const std::string& dir,
    const std::optional<HashFeaturizerConfig>& featurizer = std::nullopt);

// FNV-1a 64 content hash of a file, as 16 hex digits.
std::string file_fingerprint(const std::string& path);

// Shortest round-trip decimal rendering of a double ("nan" for NaN).
std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace rsgd
