#include "rsgd/sparse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsgd {

void SparseVector::validate() const {
  if (values.size() != indices.size()) {
    throw std::invalid_argument("sparse index/value length mismatch");
  }
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dim) {
      throw std::invalid_argument("sparse index " + std::to_string(indices[i]) +
                                  " out of range for dim " +
                                  std::to_string(dim));
    }
    if (i > 0 && indices[i] <= indices[i - 1]) {
      throw std::invalid_argument("sparse indices not strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite sparse value");
    }
  }
}

double SparseVector::l2_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

void SparseVector::l2_normalize() {
  const double n = l2_norm();
  if (n > 0.0) {
    for (double& v : values) v /= n;
  }
}

}  // namespace rsgd
