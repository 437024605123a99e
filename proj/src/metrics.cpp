#include "rsgd/metrics.hpp"

#include <stdexcept>

#include "rsgd/data_model.hpp"
#include "rsgd/losses.hpp"

namespace rsgd {

MetricsReport evaluate(const ModelSpec& spec, const ParamVector& params,
                       const std::vector<Instance>& instances,
                       double decision_threshold) {
  if (instances.empty()) {
    throw std::invalid_argument("cannot evaluate an empty instance list");
  }

  std::vector<double> scores(instances.size());
  std::vector<int> labels(instances.size());
  MetricsReport rep;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Prediction pred = forward(spec, params, instances[i].features);
    const int y = label_of(instances[i], LabelSource::expert);
    const int yhat = pred.prob >= decision_threshold ? 1 : 0;
    scores[i] = pred.score;
    labels[i] = y;
    if (y == 1) {
      (yhat == 1 ? rep.confusion.tp : rep.confusion.fn) += 1;
    } else {
      (yhat == 1 ? rep.confusion.fp : rep.confusion.tn) += 1;
    }
  }

  const auto& c = rep.confusion;
  const double total = static_cast<double>(instances.size());
  rep.accuracy = static_cast<double>(c.tp + c.tn) / total;

  const double f1_denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  rep.f1 = f1_denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / f1_denom;

  const std::int64_t pos = c.tp + c.fn, neg = c.tn + c.fp;
  if (pos > 0 && neg > 0) {
    const double tpr = static_cast<double>(c.tp) / static_cast<double>(pos);
    const double tnr = static_cast<double>(c.tn) / static_cast<double>(neg);
    rep.bacc = 0.5 * (tpr + tnr);
    rep.auc = auc_estimate(scores, labels);
  }
  return rep;
}

}  // namespace rsgd
