#pragma once

#include <stdexcept>
#include <string>

#include "rsgd/model.hpp"

namespace rsgd {

// Thrown when a checkpoint's format version tag does not match.
struct CheckpointVersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  ModelSpec spec;
  ParamVector params;
};

// Text format: version tag line, key=value spec fields, then one
// round-trip-exact parameter value per line.
void write_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace rsgd
