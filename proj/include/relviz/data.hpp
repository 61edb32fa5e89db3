#pragma once

#include "relviz/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace relviz {

struct FeatureMatrix {
  std::vector<std::string> ids;  // unique item identifiers, row order
  Matrix X;

  int n_items() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
};

// Item index -> set of class labels; multi-label allowed.
struct LabelSet {
  std::map<int, std::set<std::string>> assignments;

  void add(int item, std::string label) { assignments[item].insert(std::move(label)); }
  const std::set<std::string>* labels_of(int item) const;
  std::set<std::string> distinct_labels() const;
  bool empty() const { return assignments.empty(); }
};

struct SyntheticSpec {
  int n_items = 0;
  int n_relevant_classes = 2;
  int n_irrelevant_classes = 0;
  int feature_dim = 10;
  double cluster_separation = 6.0;
  double noise_rate = 0.0;  // fraction of user-view count mass redistributed at random
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  FeatureMatrix features;
  CountMatrix user_view;
  LabelSet relevant;
  LabelSet irrelevant;
};

// Dense similarity counts exp(-||x_i - x_j||^2 / sigma^2) over all pairs.
CountMatrix gaussian_similarity(const FeatureMatrix& features, double sigma);

// Median of all pairwise Euclidean distances; an even count averages the two
// middle values. Throws on an all-identical feature matrix.
double median_sigma(const FeatureMatrix& features);

// f_ij = number of classes shared by i and j. Observed pairs are exactly the
// pairs whose endpoints both carry at least one label.
CountMatrix labels_to_counts(const LabelSet& labels, int n_items);

// Counts divided by their total; support equals the observed pairs.
PairDistribution normalize(const CountMatrix& counts);

// Two-view synthetic data: round-robin relevant classes drive the feature
// clusters, an independently shuffled irrelevant labelling adds structured
// noise to the user view, and noise_rate of the count mass is re-dealt
// uniformly over random pairs. Deterministic in spec.seed.
SyntheticData synth_generate(const SyntheticSpec& spec);

// CSV loaders. Labels and counts reference items by the id column of the
// features (or coordinates) file, so loaders take the id universe.
FeatureMatrix load_features(const std::string& path);
LabelSet load_labels(const std::string& path, const std::vector<std::string>& ids);
CountMatrix load_counts(const std::string& path, const std::vector<std::string>& ids);

}  // namespace relviz
