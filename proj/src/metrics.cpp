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

#include "sprifed/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "sprifed/error.hpp"
#include "sprifed/rng.hpp"

namespace sprifed {
namespace {

constexpr uint64_t kTagRicSample = Tag("ric_sample");

double Ric(const Matrix& x, const std::vector<Index>& cols) {
  const Index k = static_cast<Index>(cols.size());
  Matrix g(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = a; b < k; ++b) {
      g(a, b) = x.col(cols[a]).dot(x.col(cols[b]));
      g(b, a) = g(a, b);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();  // ascending
  return std::max(ev[k - 1] - 1.0, 1.0 - ev[0]);
}

// C(p, k), saturating at `cap` + 1.
int64_t BinomialCapped(int64_t p, int64_t k, int64_t cap) {
  k = std::min(k, p - k);
  long double c = 1.0L;
  for (int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(p - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<int64_t>(std::llround(c));
}

void CheckModelWidth(const ModelEstimate& model, const Dataset& dataset) {
  if (model.support.size() != static_cast<size_t>(model.alpha_hat.size())) {
    throw ParameterError("model support and coefficients differ in length");
  }
  for (Index j : model.support) {
    if (j < 0 || j >= dataset.p()) {
      throw ParameterError("model support index exceeds dataset dimension");
    }
  }
}

const char* StatusName(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::kPass:
      return "pass";
    case ConditionStatus::kFail:
      return "fail";
    case ConditionStatus::kNotCheckable:
      return "not machine-checkable";
  }
  return "";
}

}  // namespace

nlohmann::json TrialResult::ToJson() const {
  const auto finite_or_null = [](std::optional<double> v) {
    return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json();
  };
  nlohmann::json j;
  j["config_index"] = config_index;
  j["trial"] = trial;
  j["algo"] = algo;
  j["seed"] = seed;
  j["correct_basis_count"] = correct_basis_count;
  j["exact_support"] = exact_support;
  j["test_mse"] = finite_or_null(test_mse);
  j["delta_alpha"] = finite_or_null(delta_alpha);
  j["delta_risk"] = finite_or_null(delta_risk);
  j["privacy"] = {{"mu", finite_or_null(mu)},
                  {"step_mu", finite_or_null(step_mu)},
                  {"epsilon", finite_or_null(epsilon)},
                  {"delta", finite_or_null(delta)}};
  j["flags"] = flags;
  if (runtime_ms) j["runtime_ms"] = *runtime_ms;
  return j;
}

int64_t SupportRecovery(const std::vector<Index>& predicted,
                        const std::vector<Index>& truth) {
  const std::set<Index> t(truth.begin(), truth.end());
  const std::set<Index> p(predicted.begin(), predicted.end());
  int64_t count = 0;
  for (Index j : p) count += t.count(j);
  return count;
}

double TestMse(const ModelEstimate& model, const Dataset& test_set) {
  CheckModelWidth(model, test_set);
  if (test_set.n() == 0) throw ParameterError("test set is empty");
  Vector pred = -test_set.y;
  for (size_t k = 0; k < model.support.size(); ++k) {
    pred.noalias() += model.alpha_hat[k] * test_set.x.col(model.support[k]);
  }
  return pred.squaredNorm() / static_cast<double>(test_set.n());
}

double EstimationError(const ModelEstimate& model, const Dataset& dataset) {
  CheckModelWidth(model, dataset);
  return (model.Padded(dataset.p()) - dataset.ReferenceModel()).norm();
}

double EmpiricalRisk(const ModelEstimate& model, const Dataset& dataset) {
  CheckModelWidth(model, dataset);
  const Vector reference = dataset.ReferenceModel();
  const Vector r_hat = dataset.x * model.Padded(dataset.p()) - dataset.y;
  const Vector r_ref = dataset.x * reference - dataset.y;
  return (r_hat.squaredNorm() - r_ref.squaredNorm()) /
         static_cast<double>(dataset.n());
}

Matrix NormalizeForRic(const Matrix& x) {
  return x / std::sqrt(static_cast<double>(x.rows()));
}

RicEstimate EstimateRic(const Matrix& x_normalized, Index k, RicMode mode,
                        int64_t budget, uint64_t seed) {
  const Index p = x_normalized.cols();
  if (k < 1 || k > p) throw ParameterError("estimate_ric: need 1 <= K <= p");
  if (budget < 1) throw ParameterError("estimate_ric: budget must be >= 1");

  RicEstimate out;
  if (mode == RicMode::kExhaustive) {
    if (BinomialCapped(p, k, budget) > budget) {
      throw ParameterError("estimate_ric: C(p, K) exceeds the subset budget");
    }
    std::vector<Index> cols(k);
    for (Index i = 0; i < k; ++i) cols[i] = i;
    while (true) {
      out.value = std::max(out.value, Ric(x_normalized, cols));
      ++out.subsets;
      Index i = k - 1;
      while (i >= 0 && cols[i] == p - k + i) --i;
      if (i < 0) break;
      ++cols[i];
      for (Index m = i + 1; m < k; ++m) cols[m] = cols[m - 1] + 1;
    }
    return out;
  }

  out.lower_bound = true;
  std::vector<Index> perm(p);
  std::vector<Index> cols(k);
  for (int64_t b = 0; b < budget; ++b) {
    Stream rng(DeriveKey(seed, kTagRicSample, static_cast<uint64_t>(b)));
    for (Index i = 0; i < p; ++i) perm[i] = i;
    for (Index i = 0; i < k; ++i) {
      const Index j = i + static_cast<Index>(rng.UniformInt(p - i));
      std::swap(perm[i], perm[j]);
      cols[i] = perm[i];
    }
    out.value = std::max(out.value, Ric(x_normalized, cols));
    ++out.subsets;
  }
  return out;
}

double RicRecoveryBound(Index s, RecoveryVariant variant) {
  const double root = std::sqrt(static_cast<double>(s));
  return variant == RecoveryVariant::kOmp ? 1.0 / (4.0 * (1.0 + root))
                                          : 1.0 / (root + 1.0);
}

nlohmann::json ConditionReport::ToJson() const {
  nlohmann::json j;
  j["ric"] = ric;
  j["ric_is_lower_bound"] = ric_is_lower_bound;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"detail", c.detail},
                           {"measured", c.measured},
                           {"bound", c.bound},
                           {"status", StatusName(c.status)}});
  }
  return j;
}

ConditionReport CheckRecoveryConditions(const Dataset& dataset, Index s,
                                        const PrivacyParams& params,
                                        const DiagnosticsConfig& diag,
                                        RecoveryVariant variant, int64_t ric_budget,
                                        uint64_t seed) {
  if (!dataset.has_ground_truth()) {
    throw UnsupportedMetricError("recovery conditions need a synthetic dataset");
  }
  if (s < 1 || s + 1 > dataset.p()) {
    throw ParameterError("recovery conditions need 1 <= s < p");
  }
  ConditionReport report;
  const Matrix xn = NormalizeForRic(dataset.x);
  const RicMode mode = BinomialCapped(dataset.p(), s + 1, ric_budget) <= ric_budget
                           ? RicMode::kExhaustive
                           : RicMode::kSampled;
  const RicEstimate ric = EstimateRic(xn, s + 1, mode, ric_budget, seed);
  report.ric = ric.value;
  report.ric_is_lower_bound = ric.lower_bound;

  ConditionCheck ric_check;
  ric_check.name = "ric";
  ric_check.measured = ric.value;
  ric_check.bound = RicRecoveryBound(s, variant);
  ric_check.detail = std::string(ric.lower_bound ? ">= " : "") +
                     "zeta_{s+1} from " + std::to_string(ric.subsets) + " subsets";
  // A lower bound above the threshold is a definite failure; one below it is
  // only evidence.
  ric_check.status =
      ric.value <= ric_check.bound ? ConditionStatus::kPass : ConditionStatus::kFail;
  report.checks.push_back(ric_check);

  // kappa_eps <= min_j |a_j| / (16 (sqrt(s) + 1) (1 + nu zeta)), with the
  // smallest admissible nu = 1 / (1 - zeta).
  ConditionCheck noise;
  noise.name = "kappa_eps";
  noise.measured = diag.kappa_eps;
  const Vector& a = *dataset.alpha_star;
  double min_abs = std::numeric_limits<double>::infinity();
  for (Index j : dataset.support) min_abs = std::min(min_abs, std::abs(a[j]));
  if (dataset.support.empty()) min_abs = 0.0;
  const double zeta = ric.value;
  if (zeta < 1.0) {
    const double nu = 1.0 / (1.0 - zeta);
    noise.bound = min_abs / (16.0 * (std::sqrt(static_cast<double>(s)) + 1.0) *
                             (1.0 + nu * zeta));
    noise.status = noise.measured <= noise.bound ? ConditionStatus::kPass
                                                 : ConditionStatus::kFail;
    noise.detail = "nu = " + std::to_string(nu);
  } else {
    noise.status = ConditionStatus::kFail;
    noise.detail = "zeta_{s+1} >= 1, no admissible nu";
  }
  report.checks.push_back(noise);

  ConditionCheck sample;
  sample.name = "sample_size";
  sample.measured = static_cast<double>(dataset.n());
  sample.status = ConditionStatus::kNotCheckable;
  sample.detail = "depends on unobservable constants; mu_p = " +
                  std::to_string(params.mu_p()) +
                  ", mu_s = " + std::to_string(params.mu_s());
  report.checks.push_back(sample);
  return report;
}

}  // namespace sprifed
