#pragma once

#include "relviz/types.hpp"

#include <utility>

namespace relviz {

// (y_i - y_j)^T W W^T (y_i - y_j) with W the chosen view's diagonal weights.
double weighted_sq_distance(const LatentState& state, View view, int i, int j);

// Softmax of negative weighted squared distances over `support`, computed
// with a max-shifted exponent.
PairDistribution model_distribution(const LatentState& state, View view,
                                    const std::vector<Pair>& support);

// Mean-normalized negative log-likelihood of both views plus the optional L1
// penalty on the free diagonal weights. The primary-view distribution must
// cover all pairs; the user-view term is skipped when view_balance is 0.
double cost(const LatentState& state, const PairDistribution& d_tilde,
            const PairDistribution& f_tilde, const ModelConfig& config);

struct Gradient {
  Matrix Y;
  Vector wD;
  Vector wF;

  double max_abs() const;
};

// Analytic gradient of cost() for every free parameter. Entries 0 and 1 of
// the weight gradients are identically zero (pinned parameters).
Gradient gradient(const LatentState& state, const PairDistribution& d_tilde,
                  const PairDistribution& f_tilde, const ModelConfig& config);

// Columns 0-1 of Y: the visualization.
Eigen::MatrixXd shared_coordinates(const LatentState& state);

// The two free columns with the largest |w_k| for the view, scaled by |w_k|,
// largest first; ties resolve toward the lower column index. Requires K >= 4.
Eigen::MatrixXd view_specific_coordinates(const LatentState& state, View view);

namespace detail {

// Cost and gradient in one pass over both views' supports. Summation is
// fixed-order over the sorted supports, so repeated runs agree bitwise.
std::pair<double, Gradient> cost_and_gradient(const LatentState& state,
                                              const PairDistribution& d_tilde,
                                              const PairDistribution& f_tilde,
                                              const ModelConfig& config,
                                              bool want_gradient);

}  // namespace detail

}  // namespace relviz
