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

// Evaluation metrics and recovery-condition diagnostics.

#ifndef SPRIFED_METRICS_HPP_
#define SPRIFED_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sprifed/datagen.hpp"
#include "sprifed/privacy.hpp"
#include "sprifed/sparse_recovery.hpp"

namespace sprifed {

struct TrialResult {
  std::string algo;
  int64_t config_index = 0;
  int64_t trial = 0;
  uint64_t seed = 0;
  int64_t correct_basis_count = 0;
  bool exact_support = false;
  double test_mse = 0.0;
  std::optional<double> delta_alpha;
  std::optional<double> delta_risk;
  double mu = 0.0;       // composed ledger total.
  double step_mu = 0.0;  // largest single event.
  std::optional<double> epsilon;
  std::optional<double> delta;  // at `epsilon`.
  std::vector<std::string> flags;
  std::optional<double> runtime_ms;
  nlohmann::json ToJson() const;
};

// |predicted ∩ truth|. Both sets may be in any order; repeats count once.
int64_t SupportRecovery(const std::vector<Index>& predicted,
                        const std::vector<Index>& truth);

// (1/n_test) * sum_i (x_i a - y_i)^2 with `a` the model padded into R^p.
double TestMse(const ModelEstimate& model, const Dataset& test_set);

// ||a_padded - reference||_2 against the dataset's reference model.
double EstimationError(const ModelEstimate& model, const Dataset& dataset);

// (1/n) sum_i [(x_i a - y_i)^2 - (x_i a* - y_i)^2] over the training pairs,
// with a* the reference model. Throws UnsupportedMetricError without one.
double EmpiricalRisk(const ModelEstimate& model, const Dataset& dataset);

enum class RicMode { kExhaustive, kSampled };

struct RicEstimate {
  double value = 0.0;
  bool lower_bound = false;  // true for sampled mode.
  int64_t subsets = 0;
};

// X / sqrt(n).
Matrix NormalizeForRic(const Matrix& x);

// Restricted isometry constant of order k for a matrix already scaled by
// 1/sqrt(n): the max over size-k column subsets of
// max(lambda_max(G) - 1, 1 - lambda_min(G)), G the subset Gram matrix.
// Exhaustive mode requires C(p, k) <= budget (ParameterError otherwise);
// sampled mode draws `budget` subsets and reports a lower bound.
RicEstimate EstimateRic(const Matrix& x_normalized, Index k, RicMode mode,
                        int64_t budget = 20000, uint64_t seed = 0);

enum class ConditionStatus { kPass, kFail, kNotCheckable };

struct ConditionCheck {
  std::string name;
  std::string detail;
  double measured = 0.0;
  double bound = 0.0;
  ConditionStatus status = ConditionStatus::kNotCheckable;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  double ric = 0.0;
  bool ric_is_lower_bound = true;
  nlohmann::json ToJson() const;
};

enum class RecoveryVariant { kOmp, kGrad };

// 1 / (4 (1 + sqrt(s))) for kOmp, 1 / (sqrt(s) + 1) for kGrad.
double RicRecoveryBound(Index s, RecoveryVariant variant);

// Reports the directly computable recovery conditions on a synthetic dataset:
// the order-(s+1) RIC bound (sampled estimate), the noise-level bound on
// kappa_eps, and the sample-size condition marked not machine-checkable.
// Purely diagnostic.
ConditionReport CheckRecoveryConditions(const Dataset& dataset, Index s,
                                        const PrivacyParams& params,
                                        const DiagnosticsConfig& diag,
                                        RecoveryVariant variant = RecoveryVariant::kOmp,
                                        int64_t ric_budget = 20000,
                                        uint64_t seed = 0);

}  // namespace sprifed

#endif  // SPRIFED_METRICS_HPP_
