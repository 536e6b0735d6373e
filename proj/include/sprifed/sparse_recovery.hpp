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

// Orthogonal matching pursuit, plain and differentially private.
//
// All private variants talk to the data only through NoisySmpc releases and
// record one ledger event per release. Event labels, by algorithm:
//
//   SprifedOmp                  "gamma0" (mu_p) x1, "beta_col[l]" (mu_p) xs,
//                               "ols_corr[l]" (mu_s) xs, "ols_gram_row[l]" (mu_s) xs
//   SprifedOmpNoEnhancement     "gamma0" x1, "beta_col[l]" xs, all mu_p
//   SprifedOmpGrad              "grad[l]" (mu_p) xs, plus the two ols_* families

#ifndef SPRIFED_SPARSE_RECOVERY_HPP_
#define SPRIFED_SPARSE_RECOVERY_HPP_

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sprifed/datagen.hpp"
#include "sprifed/privacy.hpp"
#include "sprifed/secureagg.hpp"

namespace sprifed {

struct ModelEstimate {
  std::vector<Index> support;  // in selection order, no repeats.
  Vector alpha_hat;            // aligned with `support`.
  std::vector<Vector> alpha_tilde_history;
  PrivacyLedger ledger;
  std::vector<std::string> flags;
  // Noiseless ||X^T r||_2 before each selection; filled by Omp() only.
  std::vector<double> gradient_norms;

  // alpha_hat embedded in R^p with zeros off the support.
  Vector Padded(Index p) const;

  // {"support":[...],"alpha_hat":[...],"ledger":{...},"flags":[...]}
  nlohmann::json ToJson(double epsilon) const;
};

// Index of the largest |v_j| over j with !excluded[j]; ties go to the lowest
// index. Returns -1 when every entry is excluded.
Index ArgmaxAbs(const Vector& v, const std::vector<bool>& excluded);

// Solves the (possibly noisy) normal equations gram * a = corr. When the
// condition number exceeds 1e12, adds a ridge of 1e-8 * |trace| / k and
// appends "ridge" to `flags`.
Vector SolveNoisyNormalEquations(const Matrix& gram, const Vector& corr,
                                 std::vector<std::string>& flags);

// Non-private OMP with an OLS refit per step. Requires 1 <= s <= min(n, p);
// throws SolverError when the selected Gram matrix is singular.
ModelEstimate Omp(const Dataset& dataset, Index s);

// Incremental private least squares on the selected support. Each call to
// AddFeature privatizes only the new correlation entry and the new Gram row
// (noise stddev sigma2 * sqrt(s) per entry) and records two mu_s events.
class PrivateOls {
 public:
  PrivateOls(const Dataset& dataset, Index s, const PrivacyParams& params,
             NoisySmpc& smpc, PrivacyLedger& ledger,
             std::vector<std::string>& flags);

  // Returns the private model over every feature added so far.
  Vector AddFeature(Index feature);

  const Matrix& gram() const { return gram_; }
  const Vector& corr() const { return corr_; }
  const std::vector<Index>& features() const { return features_; }

 private:
  const Dataset& dataset_;
  double entry_sigma_;
  double mu_s_;
  NoisySmpc& smpc_;
  PrivacyLedger& ledger_;
  std::vector<std::string>& flags_;
  std::vector<Index> features_;
  Matrix gram_;
  Vector corr_;
};

struct RecoveryOptions {
  NoisySmpc::Options smpc;
};

ModelEstimate SprifedOmp(const Dataset& dataset, Index s,
                         const PrivacyParams& params, uint64_t seed,
                         const RecoveryOptions& options = {});

// Ablation: the private model is solved from the sigma1-level artifacts
// (gamma0 restricted to the support and the symmetrized covariance block)
// instead of being re-privatized.
ModelEstimate SprifedOmpNoEnhancement(const Dataset& dataset, Index s,
                                      const PrivacyParams& params, uint64_t seed,
                                      const RecoveryOptions& options = {});

// Gradient variant. Each client clips x_ij * r_i to [-clip_bound, clip_bound];
// the aggregated gradient carries noise sigma1 * clip_bound * sqrt(p).
ModelEstimate SprifedOmpGrad(const Dataset& dataset, Index s,
                             const PrivacyParams& params, double clip_bound,
                             uint64_t seed, const RecoveryOptions& options = {});

}  // namespace sprifed

#endif  // SPRIFED_SPARSE_RECOVERY_HPP_
