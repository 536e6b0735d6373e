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

#include "sprifed/sparse_recovery.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "sprifed/error.hpp"

namespace sprifed {
namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRidgeScale = 1e-8;

// sigma * scale, with sigma == 0 winning over an infinite scale.
double NoiseScale(double sigma, double scale) {
  return sigma == 0.0 ? 0.0 : sigma * scale;
}

Matrix SelectColumns(const Matrix& x, const std::vector<Index>& cols) {
  Matrix out(x.rows(), static_cast<Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(k) = x.col(cols[k]);
  return out;
}

void CheckSparsity(const Dataset& dataset, Index s) {
  if (s < 1 || s > dataset.p()) {
    throw ParameterError("sparsity s must satisfy 1 <= s <= p");
  }
}

}  // namespace

Vector ModelEstimate::Padded(Index p) const {
  Vector out = Vector::Zero(p);
  for (size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 0 || support[k] >= p) {
      throw ParameterError("model support index out of range");
    }
    out[support[k]] = alpha_hat[k];
  }
  return out;
}

nlohmann::json ModelEstimate::ToJson(double epsilon) const {
  nlohmann::json j;
  j["support"] = support;
  j["alpha_hat"] = std::vector<double>(alpha_hat.data(),
                                       alpha_hat.data() + alpha_hat.size());
  j["ledger"] = ledger.ToJson(epsilon);
  j["flags"] = flags;
  return j;
}

Index ArgmaxAbs(const Vector& v, const std::vector<bool>& excluded) {
  Index best = -1;
  double best_abs = -1.0;
  for (Index j = 0; j < v.size(); ++j) {
    if (excluded[j]) continue;
    const double a = std::abs(v[j]);
    if (a > best_abs) {
      best = j;
      best_abs = a;
    }
  }
  return best;
}

Vector SolveNoisyNormalEquations(const Matrix& gram, const Vector& corr,
                                 std::vector<std::string>& flags) {
  const Index k = gram.rows();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector abs_eig = eig.eigenvalues().cwiseAbs();
  const double lo = abs_eig.minCoeff();
  const double hi = abs_eig.maxCoeff();
  const double condition =
      lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxCondition)) {
    double ridge = kRidgeScale * std::abs(gram.trace()) / k;
    if (!(ridge > 0.0)) ridge = kRidgeScale;
    flags.push_back("ridge");
    const Matrix regularized = gram + ridge * Matrix::Identity(k, k);
    return regularized.partialPivLu().solve(corr);
  }
  return gram.partialPivLu().solve(corr);
}

ModelEstimate Omp(const Dataset& dataset, Index s) {
  CheckSparsity(dataset, s);
  if (s > dataset.n()) throw ParameterError("omp: need s <= n");

  const Matrix& x = dataset.x;
  ModelEstimate est;
  std::vector<bool> selected(dataset.p(), false);
  Vector residual = dataset.y;
  Vector alpha;
  for (Index l = 0; l < s; ++l) {
    const Vector corr = x.transpose() * residual;
    est.gradient_norms.push_back(corr.norm());
    const Index j = ArgmaxAbs(corr, selected);
    selected[j] = true;
    est.support.push_back(j);

    const Matrix xs = SelectColumns(x, est.support);
    const Matrix gram = xs.transpose() * xs;
    const Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw SolverError("omp: Gram matrix of the selected columns is singular");
    }
    alpha = llt.solve(xs.transpose() * dataset.y);
    est.alpha_tilde_history.push_back(alpha);
    residual = dataset.y - xs * alpha;
  }
  est.alpha_hat = alpha;
  return est;
}

PrivateOls::PrivateOls(const Dataset& dataset, Index s,
                       const PrivacyParams& params, NoisySmpc& smpc,
                       PrivacyLedger& ledger, std::vector<std::string>& flags)
    : dataset_(dataset),
      entry_sigma_(NoiseScale(params.sigma2(), std::sqrt(static_cast<double>(s)))),
      mu_s_(params.mu_s()),
      smpc_(smpc),
      ledger_(ledger),
      flags_(flags) {}

Vector PrivateOls::AddFeature(Index feature) {
  const Index l = static_cast<Index>(features_.size());
  features_.push_back(feature);
  const auto new_col = dataset_.x.col(feature);
  const std::span<const double> new_span(new_col.data(), new_col.size());

  corr_.conservativeResize(l + 1);
  corr_[l] = smpc_.Dot(new_span, std::span<const double>(dataset_.y.data(),
                                                         dataset_.y.size()),
                       entry_sigma_)
                 .value;
  ledger_.Record("ols_corr[" + std::to_string(l) + "]", mu_s_);

  // New Gram row, one draw per unordered pair, mirrored.
  gram_.conservativeResize(l + 1, l + 1);
  for (Index k = 0; k <= l; ++k) {
    const auto other = dataset_.x.col(features_[k]);
    const double v =
        smpc_.Dot(new_span, std::span<const double>(other.data(), other.size()),
                  entry_sigma_)
            .value;
    gram_(l, k) = v;
    gram_(k, l) = v;
  }
  ledger_.Record("ols_gram_row[" + std::to_string(l) + "]", mu_s_);

  return SolveNoisyNormalEquations(gram_, corr_, flags_);
}

namespace {

ModelEstimate RunCorrelationOmp(const Dataset& dataset, Index s,
                                const PrivacyParams& params, uint64_t seed,
                                const RecoveryOptions& options, bool enhancement) {
  CheckSparsity(dataset, s);
  const Matrix& x = dataset.x;
  const Index p = dataset.p();
  const double release_sigma =
      NoiseScale(params.sigma1(), std::sqrt(static_cast<double>(p)));

  ModelEstimate est;
  NoisySmpc smpc(seed, options.smpc);
  PrivateOls ols(dataset, s, params, smpc, est.ledger, est.flags);

  const Vector gamma0 = smpc.DotColumns(x, dataset.y, release_sigma);
  est.ledger.Record("gamma0", params.mu_p());

  Matrix beta(p, s);
  std::vector<bool> selected(p, false);
  Vector residual_corr = gamma0;
  Vector alpha_tilde;
  for (Index l = 0; l < s; ++l) {
    const Index j = ArgmaxAbs(residual_corr, selected);
    selected[j] = true;
    est.support.push_back(j);

    const bool last = l + 1 == s;
    beta.col(l) = smpc.DotColumns(x, x.col(j), release_sigma);
    est.ledger.Record("beta_col[" + std::to_string(l) + "]", params.mu_p());

    if (enhancement) {
      alpha_tilde = ols.AddFeature(j);
    } else {
      Matrix block(l + 1, l + 1);
      Vector corr(l + 1);
      for (Index a = 0; a <= l; ++a) {
        corr[a] = gamma0[est.support[a]];
        for (Index b = 0; b <= l; ++b) block(a, b) = beta(est.support[a], b);
      }
      const Matrix sym = 0.5 * (block + block.transpose());
      alpha_tilde = SolveNoisyNormalEquations(sym, corr, est.flags);
    }
    est.alpha_tilde_history.push_back(alpha_tilde);

    if (!last) residual_corr = gamma0 - beta.leftCols(l + 1) * alpha_tilde;
  }
  // The final private model (beta_SA)^-1 gamma_SA is exactly the last solve.
  est.alpha_hat = alpha_tilde;
  return est;
}

}  // namespace

ModelEstimate SprifedOmp(const Dataset& dataset, Index s,
                         const PrivacyParams& params, uint64_t seed,
                         const RecoveryOptions& options) {
  return RunCorrelationOmp(dataset, s, params, seed, options, true);
}

ModelEstimate SprifedOmpNoEnhancement(const Dataset& dataset, Index s,
                                      const PrivacyParams& params, uint64_t seed,
                                      const RecoveryOptions& options) {
  return RunCorrelationOmp(dataset, s, params, seed, options, false);
}

ModelEstimate SprifedOmpGrad(const Dataset& dataset, Index s,
                             const PrivacyParams& params, double clip_bound,
                             uint64_t seed, const RecoveryOptions& options) {
  CheckSparsity(dataset, s);
  if (!(clip_bound > 0.0)) throw ParameterError("clip_bound must be > 0");

  const Matrix& x = dataset.x;
  const Index p = dataset.p();
  const double release_sigma = NoiseScale(
      params.sigma1(), clip_bound * std::sqrt(static_cast<double>(p)));
  const std::string clip_label =
      std::isfinite(clip_bound) ? std::to_string(clip_bound) : "inf";

  ModelEstimate est;
  NoisySmpc smpc(seed, options.smpc);
  PrivateOls ols(dataset, s, params, smpc, est.ledger, est.flags);

  std::vector<bool> selected(p, false);
  Vector alpha_tilde;
  for (Index l = 0; l < s; ++l) {
    // Every client forms its residual against the shared private model.
    Vector residual = dataset.y;
    for (size_t k = 0; k < est.support.size(); ++k) {
      residual.noalias() -= alpha_tilde[k] * x.col(est.support[k]);
    }
    const Vector grad = smpc.DotColumns(x, residual, release_sigma, clip_bound);
    est.ledger.Record("grad[" + std::to_string(l) + "] clip=" + clip_label,
                      params.mu_p());

    const Index j = ArgmaxAbs(grad, selected);
    selected[j] = true;
    est.support.push_back(j);
    alpha_tilde = ols.AddFeature(j);
    est.alpha_tilde_history.push_back(alpha_tilde);
  }
  est.alpha_hat = alpha_tilde;
  return est;
}

}  // namespace sprifed
