#pragma once

#include <cstdint>
#include <vector>

namespace rsgd {

// Sparse real vector with strictly increasing indices below `dim`.
struct SparseVector {
  std::uint32_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }

  // Throws std::invalid_argument on malformed contents.
  void validate() const;

  double l2_norm() const;

  // Scales all values so the L2 norm is 1; no-op on a zero vector.
  void l2_normalize();
};

}  // namespace rsgd
