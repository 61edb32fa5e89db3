#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace relviz {

// Row-major so that row i is the contiguous latent vector of item i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Invalid arguments or malformed data.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (flag or config-file values out of range).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The optimizer encountered a non-finite cost.
class optim_error : public std::runtime_error {
 public:
  optim_error(int iteration, std::string block);
  int iteration() const { return iteration_; }
  const std::string& block() const { return block_; }

 private:
  int iteration_;
  std::string block_;
};

// Unordered item pair, stored with i < j.
struct Pair {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

inline Pair make_pair_key(int a, int b) { return a < b ? Pair{a, b} : Pair{b, a}; }

// All pairs (i, j) with i < j in lexicographic order.
std::vector<Pair> all_pairs(int n_items);

// Flat index of (i, j) within all_pairs(n_items).
std::size_t pair_index(int i, int j, int n_items);

// Symmetric nonnegative pairwise counts for one view. `observed` is the pair
// support, sorted and unique; `counts` runs parallel to it and may hold zeros
// for pairs that were observed but judged dissimilar.
struct CountMatrix {
  int n_items = 0;
  std::vector<Pair> observed;
  std::vector<double> counts;

  double total() const;
  bool is_all_pairs() const;
  bool is_empty() const { return observed.empty(); }

  // Placeholder for a switched-off view; rejected anywhere a real view is required.
  static CountMatrix none(int n_items);

  // Throws input_error when an invariant is broken.
  void validate() const;
};

// Counts normalized to a probability distribution over item pairs.
struct PairDistribution {
  int n_items = 0;
  std::vector<Pair> support;
  std::vector<double> probs;
};

enum class View { primary, user };

// N x K latent coordinates plus per-view diagonal weights. Columns 0 and 1 of
// Y are the display; weight entries 0 and 1 are pinned at 1 for both views.
struct LatentState {
  Matrix Y;
  Vector wD;
  Vector wF;

  int n_items() const { return static_cast<int>(Y.rows()); }
  int dims() const { return static_cast<int>(Y.cols()); }
  const Vector& weights(View v) const { return v == View::primary ? wD : wF; }
};

struct ModelConfig {
  int K = 6;                    // total latent dimensions, >= 2
  double view_balance = 1.0;    // relative weight of the user-view term
  double sparsity_coeff = 0.0;  // optional L1 penalty on free diagonal weights

  void validate() const;
};

}  // namespace relviz
