#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsgd/instance.hpp"
#include "rsgd/model.hpp"

namespace rsgd {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  double f1 = 0.0;                 // positive-class F1; 0 when undefined
  std::optional<double> bacc;      // absent on single-class input
  std::optional<double> auc;       // absent on single-class input
  Confusion confusion;
};

// Thresholded evaluation against expert labels. Predictions are
// 1[p >= decision_threshold]; bACC and AUC are reported only when both
// classes are present.
MetricsReport evaluate(const ModelSpec& spec, const ParamVector& params,
                       const std::vector<Instance>& instances,
                       double decision_threshold = 0.5);

}  // namespace rsgd
