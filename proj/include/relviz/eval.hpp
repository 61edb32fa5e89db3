#pragma once

#include "relviz/data.hpp"
#include "relviz/optim.hpp"
#include "relviz/types.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <utility>

namespace relviz {

struct KnnReport {
  int k = 0;
  double accuracy = 0.0;
  int n_evaluated = 0;
  std::map<std::string, double> per_class_accuracy;
};

// Leave-one-out k-NN accuracy on 2-D coordinates. Only single-labeled items
// take part, as queries and as neighbors. Distance ties break toward the
// lower item index; vote ties break toward the tied label with the smallest
// summed distance, then lexicographically.
KnnReport loo_knn_accuracy(const Eigen::MatrixXd& coords, const LabelSet& labels, int k);

// Single-view embedding: the full model with the user-view term dropped,
// K = 2 and weights pinned at identity.
std::pair<Eigen::MatrixXd, FitReport> sne_baseline(const CountMatrix& d, const OptimConfig& optim);

struct SeparabilityReport {
  KnnReport shared_relevant;
  KnnReport shared_irrelevant;
  KnnReport user_specific_irrelevant;
  KnnReport primary_specific_relevant;
};

// k-NN separability of both labellings on the shared display and of each
// labelling on its opposite view-specific projection. Requires K >= 4.
SeparabilityReport separability_report(const LatentState& state, const LabelSet& relevant,
                                       const LabelSet& irrelevant, int k);

nlohmann::json to_json(const KnnReport& report);
nlohmann::json to_json(const SeparabilityReport& report);

}  // namespace relviz
