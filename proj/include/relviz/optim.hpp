#pragma once

#include "relviz/model.hpp"
#include "relviz/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace relviz {

struct OptimConfig {
  int max_iters = 2000;
  double step_size = 0.05;
  double moment_decay_1 = 0.9;
  double moment_decay_2 = 0.999;
  double grad_tol = 1e-5;  // on the max-abs gradient entry
  std::uint64_t seed = 0;
  double init_scale = 1e-2;

  void validate() const;
};

struct FitReport {
  std::vector<double> cost_trace;  // initial cost, then one entry per iteration
  double final_grad_norm = 0.0;
  int iterations_run = 0;
  bool converged = false;
};

// Y entries i.i.d. Gaussian(0, init_scale^2) from a generator seeded by
// optim.seed; all diagonal weights start at 1. Same seed, same state.
LatentState init_state(int n_items, const ModelConfig& config, const OptimConfig& optim);

// Adaptive-moment gradient descent on all free parameters. Stops when the
// max-abs gradient entry drops to grad_tol or after max_iters iterations.
// Weight entries 0 and 1 of both views are never written. Throws optim_error
// when a non-finite cost shows up.
std::pair<LatentState, FitReport> fit(const CountMatrix& d, const CountMatrix& f,
                                      const ModelConfig& config, const OptimConfig& optim);

// Central differences of cost() for every free parameter; pinned weight
// entries are reported as 0.
Gradient finite_diff_gradient(const LatentState& state, const PairDistribution& d_tilde,
                              const PairDistribution& f_tilde, const ModelConfig& config,
                              double h = 1e-5);

struct RestartResult {
  LatentState state;
  FitReport report;
  std::vector<double> final_costs;  // one per restart
  int selected = 0;
};

// Runs fit() `restarts` times with seeds optim.seed, optim.seed + 1, ... and
// keeps the lowest final cost (ties resolve to the lowest restart index).
// Restarts are independent, so threading does not change the result.
RestartResult fit_restarts(const CountMatrix& d, const CountMatrix& f,
                           const ModelConfig& config, const OptimConfig& optim,
                           int restarts, int threads = 1);

}  // namespace relviz
