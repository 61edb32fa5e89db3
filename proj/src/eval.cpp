#include "relviz/eval.hpp"

#include "relviz/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace relviz {

KnnReport loo_knn_accuracy(const Eigen::MatrixXd& coords, const LabelSet& labels, int k) {
  if (k < 1) throw input_error("loo_knn_accuracy: k must be >= 1");
  if (coords.cols() != 2) throw input_error("loo_knn_accuracy: coordinates must be N x 2");
  const int n = static_cast<int>(coords.rows());

  std::vector<int> eligible;  // single-labeled items, ascending index
  for (const auto& [item, set] : labels.assignments) {
    if (item < 0 || item >= n)
      throw input_error("loo_knn_accuracy: label refers to item " + std::to_string(item) +
                        " outside the coordinate rows");
    if (set.size() == 1) eligible.push_back(item);
  }
  if (static_cast<int>(eligible.size()) < k + 1)
    throw input_error("loo_knn_accuracy: need at least k+1 single-labeled items (k=" +
                      std::to_string(k) + ", have " + std::to_string(eligible.size()) + ")");

  int correct = 0;
  std::map<std::string, std::pair<int, int>> per_class;  // label -> (correct, total)
  std::vector<std::pair<double, int>> cand;
  cand.reserve(eligible.size());

  for (const int q : eligible) {
    cand.clear();
    for (const int o : eligible) {
      if (o == q) continue;
      const double dx = coords(q, 0) - coords(o, 0);
      const double dy = coords(q, 1) - coords(o, 1);
      cand.emplace_back(dx * dx + dy * dy, o);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());

    // label -> (votes, summed Euclidean distance of its voters)
    std::map<std::string, std::pair<int, double>> votes;
    for (int t = 0; t < k; ++t) {
      const std::string& lab = *labels.labels_of(cand[t].second)->begin();
      auto& slot = votes[lab];
      slot.first += 1;
      slot.second += std::sqrt(cand[t].first);
    }
    const std::string* best = nullptr;
    int best_votes = 0;
    double best_dist = 0.0;
    for (const auto& [lab, slot] : votes) {
      // map iteration is lexicographic, so first-seen wins remaining ties
      if (!best || slot.first > best_votes ||
          (slot.first == best_votes && slot.second < best_dist)) {
        best = &lab;
        best_votes = slot.first;
        best_dist = slot.second;
      }
    }

    const std::string& truth = *labels.labels_of(q)->begin();
    const bool hit = *best == truth;
    correct += hit ? 1 : 0;
    auto& pc = per_class[truth];
    pc.first += hit ? 1 : 0;
    pc.second += 1;
  }

  KnnReport report;
  report.k = k;
  report.n_evaluated = static_cast<int>(eligible.size());
  report.accuracy = static_cast<double>(correct) / report.n_evaluated;
  for (const auto& [lab, counts] : per_class)
    report.per_class_accuracy[lab] = static_cast<double>(counts.first) / counts.second;
  return report;
}

std::pair<Eigen::MatrixXd, FitReport> sne_baseline(const CountMatrix& d,
                                                   const OptimConfig& optim) {
  ModelConfig config;
  config.K = 2;
  config.view_balance = 0.0;
  config.sparsity_coeff = 0.0;
  auto [state, report] = fit(d, CountMatrix::none(d.n_items), config, optim);
  return {shared_coordinates(state), std::move(report)};
}

SeparabilityReport separability_report(const LatentState& state, const LabelSet& relevant,
                                       const LabelSet& irrelevant, int k) {
  SeparabilityReport report;
  const Eigen::MatrixXd shared = shared_coordinates(state);
  report.shared_relevant = loo_knn_accuracy(shared, relevant, k);
  report.shared_irrelevant = loo_knn_accuracy(shared, irrelevant, k);
  report.user_specific_irrelevant =
      loo_knn_accuracy(view_specific_coordinates(state, View::user), irrelevant, k);
  report.primary_specific_relevant =
      loo_knn_accuracy(view_specific_coordinates(state, View::primary), relevant, k);
  return report;
}

nlohmann::json to_json(const KnnReport& report) {
  return nlohmann::json{{"k", report.k},
                        {"accuracy", report.accuracy},
                        {"n_evaluated", report.n_evaluated},
                        {"per_class_accuracy", report.per_class_accuracy}};
}

nlohmann::json to_json(const SeparabilityReport& report) {
  return nlohmann::json{
      {"shared",
       {{"relevant", to_json(report.shared_relevant)},
        {"irrelevant", to_json(report.shared_irrelevant)}}},
      {"user_specific", {{"irrelevant", to_json(report.user_specific_irrelevant)}}},
      {"primary_specific", {{"relevant", to_json(report.primary_specific_relevant)}}}};
}

}  // namespace relviz
