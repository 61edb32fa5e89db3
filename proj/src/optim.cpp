#include "relviz/optim.hpp"

#include "relviz/data.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <thread>
#include <utility>

namespace relviz {

namespace {

constexpr double kAdamEpsilon = 1e-8;

std::string nonfinite_block(const LatentState& state) {
  if (!state.Y.allFinite()) return "Y";
  if (!state.wD.allFinite()) return "wD";
  if (!state.wF.allFinite()) return "wF";
  return "cost";
}

struct AdamMoments {
  Matrix mY, vY;
  Vector mwD, vwD, mwF, vwF;

  explicit AdamMoments(int n, int k)
      : mY(Matrix::Zero(n, k)),
        vY(Matrix::Zero(n, k)),
        mwD(Vector::Zero(k)),
        vwD(Vector::Zero(k)),
        mwF(Vector::Zero(k)),
        vwF(Vector::Zero(k)) {}
};

void adam_scalar(double g, double& m, double& v, double c1, double c2, double step,
                 double b1, double b2, double& theta) {
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g * g;
  theta -= step * (m / c1) / (std::sqrt(v / c2) + kAdamEpsilon);
}

// One bias-corrected adaptive-moment step; weight entries 0 and 1 stay untouched.
void adam_step(LatentState& state, const Gradient& grad, AdamMoments& mom, int t,
               const OptimConfig& optim) {
  const double b1 = optim.moment_decay_1;
  const double b2 = optim.moment_decay_2;
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  const double step = optim.step_size;

  mom.mY = b1 * mom.mY + (1.0 - b1) * grad.Y;
  mom.vY = b2 * mom.vY + (1.0 - b2) * grad.Y.cwiseProduct(grad.Y);
  state.Y.array() -=
      step * (mom.mY.array() / c1) / ((mom.vY.array() / c2).sqrt() + kAdamEpsilon);

  for (int k = 2; k < state.dims(); ++k) {
    adam_scalar(grad.wD[k], mom.mwD[k], mom.vwD[k], c1, c2, step, b1, b2, state.wD[k]);
    adam_scalar(grad.wF[k], mom.mwF[k], mom.vwF[k], c1, c2, step, b1, b2, state.wF[k]);
  }
}

}  // namespace

void OptimConfig::validate() const {
  if (max_iters < 1) throw config_error("max_iters must be positive");
  if (!(step_size > 0.0) || !std::isfinite(step_size))
    throw config_error("step_size must be positive");
  if (!(moment_decay_1 > 0.0 && moment_decay_1 < 1.0))
    throw config_error("moment_decay_1 must lie in (0, 1)");
  if (!(moment_decay_2 > 0.0 && moment_decay_2 < 1.0))
    throw config_error("moment_decay_2 must lie in (0, 1)");
  if (!(grad_tol > 0.0)) throw config_error("grad_tol must be positive");
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
    throw config_error("init_scale must be a finite nonnegative real");
}

LatentState init_state(int n_items, const ModelConfig& config, const OptimConfig& optim) {
  config.validate();
  optim.validate();
  if (n_items < 2) throw input_error("init_state needs at least 2 items");

  LatentState state;
  state.Y = Matrix::Zero(n_items, config.K);
  if (optim.init_scale > 0.0) {
    std::mt19937_64 rng(optim.seed);
    std::normal_distribution<double> gauss(0.0, optim.init_scale);
    for (int i = 0; i < n_items; ++i)
      for (int k = 0; k < config.K; ++k) state.Y(i, k) = gauss(rng);
  }
  state.wD = Vector::Ones(config.K);
  state.wF = Vector::Ones(config.K);
  return state;
}

std::pair<LatentState, FitReport> fit(const CountMatrix& d, const CountMatrix& f,
                                      const ModelConfig& config, const OptimConfig& optim) {
  config.validate();
  optim.validate();
  d.validate();
  if (!d.is_all_pairs()) throw input_error("primary view must cover all item pairs");
  const bool use_user = config.view_balance != 0.0;
  PairDistribution f_tilde;
  if (use_user) {
    f.validate();
    if (f.n_items != d.n_items) throw input_error("views disagree on the number of items");
    f_tilde = normalize(f);
  }
  const PairDistribution d_tilde = normalize(d);

  LatentState state = init_state(d.n_items, config, optim);
  AdamMoments mom(d.n_items, config.K);
  FitReport report;

  auto eval = detail::cost_and_gradient(state, d_tilde, f_tilde, config, true);
  if (!std::isfinite(eval.first)) throw optim_error(0, nonfinite_block(state));
  report.cost_trace.push_back(eval.first);

  int t = 0;
  bool converged = eval.second.max_abs() <= optim.grad_tol;
  while (!converged && t < optim.max_iters) {
    ++t;
    adam_step(state, eval.second, mom, t, optim);
    eval = detail::cost_and_gradient(state, d_tilde, f_tilde, config, true);
    if (!std::isfinite(eval.first)) throw optim_error(t, nonfinite_block(state));
    report.cost_trace.push_back(eval.first);
    converged = eval.second.max_abs() <= optim.grad_tol;
  }
  report.iterations_run = t;
  report.converged = converged;
  report.final_grad_norm = eval.second.max_abs();
  return {std::move(state), std::move(report)};
}

Gradient finite_diff_gradient(const LatentState& state, const PairDistribution& d_tilde,
                              const PairDistribution& f_tilde, const ModelConfig& config,
                              double h) {
  if (!(h > 0.0)) throw input_error("finite difference step must be positive");
  const int N = state.n_items();
  const int K = state.dims();

  Gradient grad;
  grad.Y = Matrix::Zero(N, K);
  grad.wD = Vector::Zero(K);
  grad.wF = Vector::Zero(K);

  LatentState probe = state;
  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + h;
    const double up = cost(probe, d_tilde, f_tilde, config);
    slot = saved - h;
    const double down = cost(probe, d_tilde, f_tilde, config);
    slot = saved;
    return (up - down) / (2.0 * h);
  };

  for (int i = 0; i < N; ++i)
    for (int k = 0; k < K; ++k) grad.Y(i, k) = central(probe.Y(i, k));
  for (int k = 2; k < K; ++k) {
    grad.wD[k] = central(probe.wD[k]);
    grad.wF[k] = central(probe.wF[k]);
  }
  return grad;
}

RestartResult fit_restarts(const CountMatrix& d, const CountMatrix& f,
                           const ModelConfig& config, const OptimConfig& optim, int restarts,
                           int threads) {
  if (restarts < 1) throw input_error("restarts must be >= 1");
  if (threads < 1) throw input_error("threads must be >= 1");

  std::vector<std::optional<std::pair<LatentState, FitReport>>> runs(restarts);
  std::vector<std::exception_ptr> errors(restarts);
  auto run_one = [&](int r) {
    OptimConfig oc = optim;
    oc.seed = optim.seed + static_cast<std::uint64_t>(r);
    try {
      runs[r] = fit(d, f, config, oc);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  const int workers = std::min(threads, restarts);
  if (workers <= 1) {
    for (int r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) run_one(r);
      });
    for (auto& th : pool) th.join();
  }
  for (int r = 0; r < restarts; ++r)
    if (errors[r]) std::rethrow_exception(errors[r]);

  RestartResult result;
  result.final_costs.reserve(restarts);
  int best = 0;
  for (int r = 0; r < restarts; ++r) {
    result.final_costs.push_back(runs[r]->second.cost_trace.back());
    if (result.final_costs[r] < result.final_costs[best]) best = r;
  }
  result.selected = best;
  result.state = std::move(runs[best]->first);
  result.report = std::move(runs[best]->second);
  return result;
}

}  // namespace relviz
