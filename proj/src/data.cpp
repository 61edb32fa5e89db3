#include "relviz/data.hpp"

#include "relviz/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace relviz {

const std::set<std::string>* LabelSet::labels_of(int item) const {
  auto it = assignments.find(item);
  return it == assignments.end() ? nullptr : &it->second;
}

std::set<std::string> LabelSet::distinct_labels() const {
  std::set<std::string> all;
  for (const auto& [item, labels] : assignments) all.insert(labels.begin(), labels.end());
  return all;
}

void SyntheticSpec::validate() const {
  if (n_items < 2) throw input_error("synthetic spec: n_items must be >= 2");
  if (n_relevant_classes < 2) throw input_error("synthetic spec: need >= 2 relevant classes");
  if (n_irrelevant_classes != 0 && n_irrelevant_classes < 2)
    throw input_error("synthetic spec: irrelevant classes must be 0 or >= 2");
  if (feature_dim < n_relevant_classes)
    throw input_error("synthetic spec: feature_dim must be >= n_relevant_classes");
  if (!(cluster_separation > 0.0))
    throw input_error("synthetic spec: cluster_separation must be positive");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0))
    throw input_error("synthetic spec: noise_rate must lie in [0, 1]");
}

CountMatrix gaussian_similarity(const FeatureMatrix& features, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw input_error("gaussian_similarity: sigma must be positive");
  const int n = features.n_items();
  if (n < 2) throw input_error("gaussian_similarity: need at least 2 items");

  CountMatrix out;
  out.n_items = n;
  out.observed = all_pairs(n);
  out.counts.resize(out.observed.size());
  const double inv_s2 = 1.0 / (sigma * sigma);
  for (std::size_t m = 0; m < out.observed.size(); ++m) {
    const Pair& p = out.observed[m];
    const double d2 = (features.X.row(p.i) - features.X.row(p.j)).squaredNorm();
    out.counts[m] = std::exp(-d2 * inv_s2);
  }
  return out;
}

double median_sigma(const FeatureMatrix& features) {
  const int n = features.n_items();
  if (n < 2) throw input_error("median_sigma: need at least 2 items");
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  bool any_nonzero = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (features.X.row(i) - features.X.row(j)).norm();
      any_nonzero = any_nonzero || d > 0.0;
      dists.push_back(d);
    }
  if (!any_nonzero) throw input_error("median_sigma: degenerate feature matrix");
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  return m % 2 == 1 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

CountMatrix labels_to_counts(const LabelSet& labels, int n_items) {
  std::vector<int> labeled;
  for (const auto& [item, set] : labels.assignments) {
    if (item < 0 || item >= n_items)
      throw input_error("labels_to_counts: item index " + std::to_string(item) +
                        " out of range");
    if (!set.empty()) labeled.push_back(item);
  }

  CountMatrix out;
  out.n_items = n_items;
  for (std::size_t a = 0; a < labeled.size(); ++a) {
    const auto& la = labels.assignments.at(labeled[a]);
    for (std::size_t b = a + 1; b < labeled.size(); ++b) {
      const auto& lb = labels.assignments.at(labeled[b]);
      int shared = 0;
      for (const auto& cls : la) shared += lb.count(cls) ? 1 : 0;
      out.observed.push_back({labeled[a], labeled[b]});
      out.counts.push_back(static_cast<double>(shared));
    }
  }
  return out;
}

PairDistribution normalize(const CountMatrix& counts) {
  counts.validate();
  const double total = counts.total();
  if (!(total > 0.0)) throw input_error("cannot normalize a view with zero total count");

  PairDistribution out;
  out.n_items = counts.n_items;
  out.support = counts.observed;
  out.probs.resize(counts.counts.size());
  for (std::size_t m = 0; m < counts.counts.size(); ++m) out.probs[m] = counts.counts[m] / total;
  return out;
}

SyntheticData synth_generate(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int n = spec.n_items;

  SyntheticData data;
  for (int i = 0; i < n; ++i)
    data.relevant.add(i, "rel" + std::to_string(i % spec.n_relevant_classes));

  if (spec.n_irrelevant_classes > 0) {
    std::vector<int> assign(n);
    for (int i = 0; i < n; ++i) assign[i] = i % spec.n_irrelevant_classes;
    std::shuffle(assign.begin(), assign.end(), rng);
    for (int i = 0; i < n; ++i) data.irrelevant.add(i, "irr" + std::to_string(assign[i]));
  }

  // Cluster means sit at cluster_separation along one axis per relevant
  // class; the remaining feature dimensions carry pure noise.
  data.features.X = Matrix::Zero(n, spec.feature_dim);
  data.features.ids.reserve(n);
  std::normal_distribution<double> unit_gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    data.features.ids.push_back(std::to_string(i));
    data.features.X(i, i % spec.n_relevant_classes) = spec.cluster_separation;
    for (int kdim = 0; kdim < spec.feature_dim; ++kdim)
      data.features.X(i, kdim) += unit_gauss(rng);
  }

  LabelSet merged = data.relevant;
  for (const auto& [item, labels] : data.irrelevant.assignments)
    for (const auto& label : labels) merged.add(item, label);
  data.user_view = labels_to_counts(merged, n);

  if (spec.noise_rate > 0.0) {
    const double total = data.user_view.total();
    const auto n_draws =
        std::min(std::llround(spec.noise_rate * total), std::llround(std::floor(total)));
    if (n_draws > 0) {
      const double keep = (total - static_cast<double>(n_draws)) / total;
      for (double& c : data.user_view.counts) c *= keep;
      std::uniform_int_distribution<int> first(0, n - 1);
      std::uniform_int_distribution<int> second(0, n - 2);
      for (long long t = 0; t < n_draws; ++t) {
        const int a = first(rng);
        int b = second(rng);
        if (b >= a) ++b;
        const Pair p = make_pair_key(a, b);
        data.user_view.counts[pair_index(p.i, p.j, n)] += 1.0;
      }
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// CSV loaders
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.empty()) throw input_error(path + ": empty file");
  return lines;
}

[[noreturn]] void fail_at(const std::string& path, std::size_t line_no, const std::string& what) {
  throw input_error(path + ":" + std::to_string(line_no + 1) + ": " + what);
}

std::unordered_map<std::string, int> index_of_ids(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, int> index;
  index.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));
  return index;
}

}  // namespace

FeatureMatrix load_features(const std::string& path) {
  const auto lines = read_lines(path);
  const auto header = split_csv(lines[0]);
  if (header.size() < 2 || header[0] != "id")
    fail_at(path, 0, "expected header 'id,f1,...,fD'");
  const int dim = static_cast<int>(header.size()) - 1;

  FeatureMatrix out;
  std::unordered_set<std::string> seen;
  std::vector<std::vector<double>> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) fail_at(path, ln, "empty row");
    const auto fields = split_csv(lines[ln]);
    if (fields.size() != header.size())
      fail_at(path, ln,
              "expected " + std::to_string(header.size()) + " fields, got " +
                  std::to_string(fields.size()));
    if (fields[0].empty()) fail_at(path, ln, "empty item id");
    if (!seen.insert(fields[0]).second) fail_at(path, ln, "duplicate item id '" + fields[0] + "'");
    out.ids.push_back(fields[0]);
    std::vector<double> row(dim);
    for (int c = 0; c < dim; ++c) {
      const double v = parse_double_field(fields[c + 1], path + ":" + std::to_string(ln + 1));
      if (!std::isfinite(v)) fail_at(path, ln, "non-finite feature value");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw input_error(path + ": need at least 2 items");

  out.X = Matrix(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int c = 0; c < dim; ++c) out.X(static_cast<int>(i), c) = rows[i][c];
  return out;
}

LabelSet load_labels(const std::string& path, const std::vector<std::string>& ids) {
  const auto lines = read_lines(path);
  const auto header = split_csv(lines[0]);
  if (header.size() != 2 || header[0] != "id" || header[1] != "label")
    fail_at(path, 0, "expected header 'id,label'");
  const auto index = index_of_ids(ids);

  LabelSet out;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) fail_at(path, ln, "empty row");
    const auto fields = split_csv(lines[ln]);
    if (fields.size() != 2) fail_at(path, ln, "expected 2 fields");
    const auto it = index.find(fields[0]);
    if (it == index.end()) fail_at(path, ln, "unknown item id '" + fields[0] + "'");
    if (fields[1].empty()) fail_at(path, ln, "empty label");
    out.add(it->second, fields[1]);
  }
  if (!out.empty() && out.distinct_labels().size() < 2)
    throw input_error(path + ": need at least two distinct labels (or none)");
  return out;
}

CountMatrix load_counts(const std::string& path, const std::vector<std::string>& ids) {
  const auto lines = read_lines(path);
  const auto header = split_csv(lines[0]);
  if (header.size() != 3 || header[0] != "i" || header[1] != "j" || header[2] != "count")
    fail_at(path, 0, "expected header 'i,j,count'");
  const auto index = index_of_ids(ids);

  std::map<Pair, double> acc;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) fail_at(path, ln, "empty row");
    const auto fields = split_csv(lines[ln]);
    if (fields.size() != 3) fail_at(path, ln, "expected 3 fields");
    const auto a = index.find(fields[0]);
    const auto b = index.find(fields[1]);
    if (a == index.end()) fail_at(path, ln, "unknown item id '" + fields[0] + "'");
    if (b == index.end()) fail_at(path, ln, "unknown item id '" + fields[1] + "'");
    if (a->second == b->second) fail_at(path, ln, "self-pair '" + fields[0] + "'");
    const double c = parse_double_field(fields[2], path + ":" + std::to_string(ln + 1));
    if (!std::isfinite(c) || c < 0.0) fail_at(path, ln, "count must be a finite nonnegative real");
    acc[make_pair_key(a->second, b->second)] += c;
  }

  CountMatrix out;
  out.n_items = static_cast<int>(ids.size());
  out.observed.reserve(acc.size());
  out.counts.reserve(acc.size());
  for (const auto& [pair, count] : acc) {
    out.observed.push_back(pair);
    out.counts.push_back(count);
  }
  out.validate();
  return out;
}

}  // namespace relviz
