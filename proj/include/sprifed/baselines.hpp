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

// Federated DP baselines: full-batch DP-SGD on the L1-regularized squared
// loss, and greedy coordinate descent with a private argmax (DP-GCD).

#ifndef SPRIFED_BASELINES_HPP_
#define SPRIFED_BASELINES_HPP_

#include <cstdint>
#include <limits>

#include "sprifed/datagen.hpp"
#include "sprifed/sparse_recovery.hpp"

namespace sprifed {

struct SgdConfig {
  double learning_rate = 0.5;
  double l1_coef = 0.0;
  double mu_step = 0.543;  // GDP constant of one gradient release.
  double clip_bound = 1.0;  // per-client L2 clip.
  double max_budget_mu = 1.32;
  int64_t max_steps = 10000;
  uint64_t seed = 0;
};

struct GcdConfig {
  double learning_rate = 1.0;
  int64_t total_steps = 1;
  double mu_p = 0.543;  // sigma1 = 1 / mu_p.
  double clip_bound = 1.0;  // per-client, per-coordinate clip.
  uint64_t seed = 0;
};

// prox of t * |.|: sign(v) * max(|v| - t, 0).
double SoftThreshold(double v, double threshold);

// Rounds run while the composed ledger stays within max_budget_mu (and below
// max_steps). Each round releases sum_i clip_C(x_i (x_i a - y_i)) with noise
// stddev clip_bound / mu_step, then takes a proximal step on the averaged
// gradient. The support is the top-s coordinates of |a|, ties to the lowest
// index; alpha_hat holds the unrefitted coefficients there.
ModelEstimate DpSgdL1(const Dataset& dataset, Index s, const SgdConfig& config);

// total_steps rounds. Each round privately picks j* = argmax |X_j^T r| (noise
// sigma1 * C * sqrt(p)), re-privatizes that one coordinate (noise sigma1 * C)
// and moves a[j*] along it. Both releases are recorded as mu_p events. The
// support is the s_report most recently updated distinct coordinates.
ModelEstimate DpGcd(const Dataset& dataset, Index s_report, const GcdConfig& config);

}  // namespace sprifed

#endif  // SPRIFED_BASELINES_HPP_
