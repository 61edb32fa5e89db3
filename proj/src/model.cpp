#include "relviz/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace relviz {

namespace {

void check_index(const LatentState& state, int idx) {
  if (idx < 0 || idx >= state.n_items())
    throw input_error("item index " + std::to_string(idx) + " out of range [0, " +
                      std::to_string(state.n_items()) + ")");
}

bool state_finite(const LatentState& state) {
  return state.Y.allFinite() && state.wD.allFinite() && state.wF.allFinite();
}

void check_support(const PairDistribution& dist, int n_items, const char* which) {
  if (dist.n_items != n_items)
    throw input_error(std::string(which) + " distribution item count does not match the state");
  if (dist.support.size() != dist.probs.size())
    throw input_error(std::string(which) + " distribution support/probs length mismatch");
  if (!dist.support.empty() &&
      (dist.support.front().i < 0 || dist.support.back().j >= n_items))
    throw input_error(std::string(which) + " distribution refers to out-of-range items");
}

// Cost contribution of one view: scale * (sum_m probs[m] * delta[m] + log Z),
// with Z the max-shifted softmax normalizer over the support. Accumulates
// into grad_Y / grad_w (free entries k >= 2 only) when given.
double view_cost_grad(const Matrix& Y, const Vector& w, const std::vector<Pair>& support,
                      const std::vector<double>& data_probs, double scale, Matrix* grad_Y,
                      Vector* grad_w) {
  const int K = static_cast<int>(Y.cols());
  const std::size_t M = support.size();
  Vector w2(K);
  for (int k = 0; k < K; ++k) w2[k] = w[k] * w[k];

  std::vector<double> delta(M);
  double data_term = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
  const double* ydata = Y.data();
  for (std::size_t m = 0; m < M; ++m) {
    const double* yi = ydata + static_cast<std::ptrdiff_t>(support[m].i) * K;
    const double* yj = ydata + static_cast<std::ptrdiff_t>(support[m].j) * K;
    double d = 0.0;
    for (int k = 0; k < K; ++k) {
      const double diff = yi[k] - yj[k];
      d += w2[k] * diff * diff;
    }
    delta[m] = d;
    data_term += data_probs[m] * d;
    dmin = std::min(dmin, d);
  }

  double z_sum = 0.0;
  for (std::size_t m = 0; m < M; ++m) z_sum += std::exp(dmin - delta[m]);
  const double log_z = std::log(z_sum) - dmin;
  const double c = scale * (data_term + log_z);

  if (grad_Y) {
    double* gdata = grad_Y->data();
    for (std::size_t m = 0; m < M; ++m) {
      const double p = std::exp(dmin - delta[m]) / z_sum;
      const double g = scale * (data_probs[m] - p);
      const int i = support[m].i, j = support[m].j;
      const double* yi = ydata + static_cast<std::ptrdiff_t>(i) * K;
      const double* yj = ydata + static_cast<std::ptrdiff_t>(j) * K;
      double* gi = gdata + static_cast<std::ptrdiff_t>(i) * K;
      double* gj = gdata + static_cast<std::ptrdiff_t>(j) * K;
      for (int k = 0; k < K; ++k) {
        const double diff = yi[k] - yj[k];
        const double gy = 2.0 * g * w2[k] * diff;
        gi[k] += gy;
        gj[k] -= gy;
        if (k >= 2) (*grad_w)[k] += 2.0 * g * w[k] * diff * diff;
      }
    }
  }
  return c;
}

}  // namespace

double weighted_sq_distance(const LatentState& state, View view, int i, int j) {
  check_index(state, i);
  check_index(state, j);
  if (i == j) throw input_error("weighted_sq_distance needs two distinct items");
  const Vector& w = state.weights(view);
  double d = 0.0;
  for (int k = 0; k < state.dims(); ++k) {
    const double diff = state.Y(i, k) - state.Y(j, k);
    d += w[k] * w[k] * diff * diff;
  }
  return d;
}

PairDistribution model_distribution(const LatentState& state, View view,
                                    const std::vector<Pair>& support) {
  if (support.empty()) throw input_error("model_distribution: empty support");
  if (!state_finite(state)) throw input_error("model_distribution: non-finite latent state");
  const int K = state.dims();
  const Vector& w = state.weights(view);

  std::vector<double> delta(support.size());
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < support.size(); ++m) {
    const Pair& p = support[m];
    check_index(state, p.i);
    check_index(state, p.j);
    double d = 0.0;
    for (int k = 0; k < K; ++k) {
      const double diff = state.Y(p.i, k) - state.Y(p.j, k);
      d += w[k] * w[k] * diff * diff;
    }
    delta[m] = d;
    dmin = std::min(dmin, d);
  }
  double z_sum = 0.0;
  for (double d : delta) z_sum += std::exp(dmin - d);

  PairDistribution out;
  out.n_items = state.n_items();
  out.support = support;
  out.probs.resize(support.size());
  for (std::size_t m = 0; m < support.size(); ++m)
    out.probs[m] = std::exp(dmin - delta[m]) / z_sum;
  return out;
}

double Gradient::max_abs() const {
  double m = 0.0;
  if (Y.size() > 0) m = Y.cwiseAbs().maxCoeff();
  if (wD.size() > 0) m = std::max(m, wD.cwiseAbs().maxCoeff());
  if (wF.size() > 0) m = std::max(m, wF.cwiseAbs().maxCoeff());
  return m;
}

namespace detail {

std::pair<double, Gradient> cost_and_gradient(const LatentState& state,
                                              const PairDistribution& d_tilde,
                                              const PairDistribution& f_tilde,
                                              const ModelConfig& config, bool want_gradient) {
  config.validate();
  const int N = state.n_items();
  const int K = state.dims();
  if (K != config.K)
    throw input_error("latent state has K=" + std::to_string(K) + " but config asks for K=" +
                      std::to_string(config.K));
  check_support(d_tilde, N, "primary-view");
  if (d_tilde.support.size() != static_cast<std::size_t>(N) * (N - 1) / 2)
    throw input_error("primary-view distribution must cover all item pairs");
  const bool use_user = config.view_balance != 0.0;
  if (use_user) {
    check_support(f_tilde, N, "user-view");
    if (f_tilde.support.empty()) throw input_error("user-view distribution has empty support");
  }

  Gradient grad;
  Matrix* gY = nullptr;
  Vector* gwD = nullptr;
  Vector* gwF = nullptr;
  if (want_gradient) {
    grad.Y = Matrix::Zero(N, K);
    grad.wD = Vector::Zero(K);
    grad.wF = Vector::Zero(K);
    gY = &grad.Y;
    gwD = &grad.wD;
    gwF = &grad.wF;
  }

  double c = view_cost_grad(state.Y, state.wD, d_tilde.support, d_tilde.probs, 1.0, gY, gwD);
  if (use_user)
    c += view_cost_grad(state.Y, state.wF, f_tilde.support, f_tilde.probs, config.view_balance,
                        gY, gwF);

  if (config.sparsity_coeff > 0.0) {
    const double rho = config.sparsity_coeff;
    for (int k = 2; k < K; ++k) {
      c += rho * (std::abs(state.wD[k]) + std::abs(state.wF[k]));
      if (want_gradient) {
        grad.wD[k] += rho * ((state.wD[k] > 0.0) - (state.wD[k] < 0.0));
        grad.wF[k] += rho * ((state.wF[k] > 0.0) - (state.wF[k] < 0.0));
      }
    }
  }
  return {c, std::move(grad)};
}

}  // namespace detail

double cost(const LatentState& state, const PairDistribution& d_tilde,
            const PairDistribution& f_tilde, const ModelConfig& config) {
  return detail::cost_and_gradient(state, d_tilde, f_tilde, config, false).first;
}

Gradient gradient(const LatentState& state, const PairDistribution& d_tilde,
                  const PairDistribution& f_tilde, const ModelConfig& config) {
  return detail::cost_and_gradient(state, d_tilde, f_tilde, config, true).second;
}

Eigen::MatrixXd shared_coordinates(const LatentState& state) {
  return state.Y.leftCols(2);
}

Eigen::MatrixXd view_specific_coordinates(const LatentState& state, View view) {
  const int K = state.dims();
  if (K < 4) throw input_error("insufficient view-specific dimensions (K >= 4 required)");
  const Vector& w = state.weights(view);
  std::vector<int> free_dims(K - 2);
  for (int k = 2; k < K; ++k) free_dims[k - 2] = k;
  std::stable_sort(free_dims.begin(), free_dims.end(),
                   [&](int a, int b) { return std::abs(w[a]) > std::abs(w[b]); });
  const std::array<int, 2> picked = {free_dims[0], free_dims[1]};
  Eigen::MatrixXd out(state.n_items(), 2);
  out.col(0) = state.Y.col(picked[0]) * std::abs(w[picked[0]]);
  out.col(1) = state.Y.col(picked[1]) * std::abs(w[picked[1]]);
  return out;
}

}  // namespace relviz
