//
// Copyright 2026 The SPriFed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "sprifed/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sprifed/error.hpp"
#include "sprifed/secureagg.hpp"

namespace sprifed {
namespace {

constexpr double kDivergenceNorm = 1e6;

double InverseMu(double mu) { return std::isinf(mu) ? 0.0 : 1.0 / mu; }

// Indices of the s largest |a_j|, largest first, ties to the lowest index.
std::vector<Index> TopS(const Vector& a, Index s) {
  std::vector<Index> order(a.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) {
    return std::abs(a[l]) > std::abs(a[r]);
  });
  order.resize(s);
  return order;
}

}  // namespace

double SoftThreshold(double v, double threshold) {
  const double m = std::abs(v) - threshold;
  return m > 0.0 ? std::copysign(m, v) : 0.0;
}

ModelEstimate DpSgdL1(const Dataset& dataset, Index s, const SgdConfig& config) {
  if (s < 1 || s > dataset.p()) throw ParameterError("dp_sgd_l1: need 1 <= s <= p");
  if (!(config.learning_rate > 0.0)) {
    throw ParameterError("dp_sgd_l1: learning_rate must be > 0");
  }
  if (!(config.mu_step > 0.0) || !(config.max_budget_mu > 0.0)) {
    throw ParameterError("dp_sgd_l1: mu_step and max_budget_mu must be > 0");
  }
  if (!(config.clip_bound > 0.0)) throw ParameterError("dp_sgd_l1: clip_bound must be > 0");
  if (!(config.l1_coef >= 0.0)) throw ParameterError("dp_sgd_l1: l1_coef must be >= 0");

  const Matrix& x = dataset.x;
  const Index n = dataset.n();
  const double sigma =
      std::isinf(config.mu_step) ? 0.0 : config.clip_bound / config.mu_step;
  const bool clip = std::isfinite(config.clip_bound);
  const Vector row_norms = x.rowwise().norm();

  ModelEstimate est;
  NoisySmpc smpc(config.seed);
  Vector alpha = Vector::Zero(dataset.p());
  const double step_sq = std::isinf(config.mu_step) ? 0.0 : config.mu_step * config.mu_step;
  double spent_sq = 0.0;
  for (int64_t t = 0; t < config.max_steps; ++t) {
    if (std::sqrt(spent_sq + step_sq) > config.max_budget_mu * (1.0 + 1e-12)) break;

    Vector weights = x * alpha - dataset.y;  // per-client gradient is w_i x_i
    if (clip) {
      for (Index i = 0; i < n; ++i) {
        const double norm = std::abs(weights[i]) * row_norms[i];
        if (norm > config.clip_bound) weights[i] *= config.clip_bound / norm;
      }
    }
    const Vector grad_sum = smpc.DotColumns(x, weights, sigma);
    est.ledger.Record("sgd_step[" + std::to_string(t) + "]", config.mu_step);
    spent_sq += step_sq;

    const double lr = config.learning_rate;
    const Vector stepped = alpha - (lr / n) * grad_sum;
    for (Index j = 0; j < alpha.size(); ++j) {
      alpha[j] = SoftThreshold(stepped[j], lr * config.l1_coef);
    }
    if (!(alpha.norm() <= kDivergenceNorm)) {
      est.flags.push_back("diverged");
      break;
    }
  }

  est.support = TopS(alpha, s);
  est.alpha_hat.resize(s);
  for (Index k = 0; k < s; ++k) est.alpha_hat[k] = alpha[est.support[k]];
  est.alpha_tilde_history.push_back(alpha);
  return est;
}

ModelEstimate DpGcd(const Dataset& dataset, Index s_report, const GcdConfig& config) {
  if (s_report < 1 || s_report > dataset.p()) {
    throw ParameterError("dp_gcd: need 1 <= s_report <= p");
  }
  if (config.total_steps < 1) throw ParameterError("dp_gcd: total_steps must be >= 1");
  if (!(config.learning_rate > 0.0)) {
    throw ParameterError("dp_gcd: learning_rate must be > 0");
  }
  if (!(config.mu_p > 0.0)) throw ParameterError("dp_gcd: mu_p must be > 0");
  if (!(config.clip_bound > 0.0)) throw ParameterError("dp_gcd: clip_bound must be > 0");

  const Matrix& x = dataset.x;
  const Index n = dataset.n();
  const Index p = dataset.p();
  const double sigma1 = InverseMu(config.mu_p);
  const double clip = config.clip_bound;
  const double select_sigma =
      sigma1 == 0.0 ? 0.0 : sigma1 * clip * std::sqrt(static_cast<double>(p));
  const double step_sigma = sigma1 == 0.0 ? 0.0 : sigma1 * clip;

  ModelEstimate est;
  NoisySmpc smpc(config.seed);
  Vector alpha = Vector::Zero(p);
  std::vector<Index> recency;  // most recent first, distinct
  std::vector<bool> none(p, false);
  std::vector<double> contributions(n);
  for (int64_t t = 0; t < config.total_steps; ++t) {
    const Vector residual = dataset.y - x * alpha;
    const Vector corr = smpc.DotColumns(x, residual, select_sigma, clip);
    est.ledger.Record("gcd_select[" + std::to_string(t) + "]", config.mu_p);
    const Index j = ArgmaxAbs(corr, none);

    for (Index i = 0; i < n; ++i) {
      contributions[i] = std::clamp(x(i, j) * residual[i], -clip, clip);
    }
    const double step_corr = smpc.SecureSum(contributions, step_sigma).value;
    est.ledger.Record("gcd_step[" + std::to_string(t) + "]", config.mu_p);

    // The loss gradient is -X_j^T r, so this is a descent step.
    alpha[j] += config.learning_rate * step_corr;

    recency.erase(std::remove(recency.begin(), recency.end(), j), recency.end());
    recency.insert(recency.begin(), j);
  }

  const size_t keep = std::min<size_t>(recency.size(), s_report);
  est.support.assign(recency.begin(), recency.begin() + keep);
  est.alpha_hat.resize(keep);
  for (size_t k = 0; k < keep; ++k) est.alpha_hat[k] = alpha[est.support[k]];
  est.alpha_tilde_history.push_back(alpha);
  return est;
}

}  // namespace sprifed
