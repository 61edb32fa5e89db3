#include "relviz/types.hpp"

#include <cmath>
#include <numeric>

namespace relviz {

optim_error::optim_error(int iteration, std::string block)
    : std::runtime_error("non-finite cost at iteration " + std::to_string(iteration) +
                         " (parameter block: " + block + ")"),
      iteration_(iteration),
      block_(std::move(block)) {}

std::vector<Pair> all_pairs(int n_items) {
  std::vector<Pair> pairs;
  if (n_items < 2) return pairs;
  pairs.reserve(static_cast<std::size_t>(n_items) * (n_items - 1) / 2);
  for (int i = 0; i < n_items; ++i)
    for (int j = i + 1; j < n_items; ++j) pairs.push_back({i, j});
  return pairs;
}

std::size_t pair_index(int i, int j, int n_items) {
  const auto n = static_cast<std::size_t>(n_items);
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>(j);
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

double CountMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

bool CountMatrix::is_all_pairs() const {
  return observed.size() == static_cast<std::size_t>(n_items) * (n_items - 1) / 2;
}

CountMatrix CountMatrix::none(int n_items) { return CountMatrix{n_items, {}, {}}; }

void CountMatrix::validate() const {
  if (n_items < 2) throw input_error("count matrix needs at least 2 items");
  if (observed.size() != counts.size())
    throw input_error("count matrix: observed pairs and counts differ in length");
  if (observed.empty()) throw input_error("count matrix has no observed pairs");
  const Pair* prev = nullptr;
  bool any_positive = false;
  for (std::size_t m = 0; m < observed.size(); ++m) {
    const Pair& p = observed[m];
    if (p.i < 0 || p.j >= n_items || p.i >= p.j)
      throw input_error("count matrix: invalid pair (" + std::to_string(p.i) + ", " +
                        std::to_string(p.j) + ")");
    if (prev && !(*prev < p)) throw input_error("count matrix: pairs not sorted and unique");
    prev = &p;
    const double c = counts[m];
    if (!std::isfinite(c) || c < 0.0)
      throw input_error("count matrix: count for pair (" + std::to_string(p.i) + ", " +
                        std::to_string(p.j) + ") is negative or non-finite");
    any_positive = any_positive || c > 0.0;
  }
  if (!any_positive) throw input_error("count matrix has no strictly positive count");
}

void ModelConfig::validate() const {
  if (K < 2) throw config_error("K must be >= 2");
  if (!(view_balance >= 0.0) || !std::isfinite(view_balance))
    throw config_error("view_balance must be a finite nonnegative real");
  if (!(sparsity_coeff >= 0.0) || !std::isfinite(sparsity_coeff))
    throw config_error("sparsity_coeff must be a finite nonnegative real");
}

}  // namespace relviz
