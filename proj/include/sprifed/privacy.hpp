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

// Gaussian differential privacy accounting.
//
// A Gaussian release with L2 sensitivity D and noise stddev D / mu is mu-GDP.
// mu-GDP mechanisms compose as sqrt(sum mu_i^2) and convert losslessly to the
// (epsilon, delta(epsilon)) curve
//
//   delta(eps) = Phi(-eps/mu + mu/2) - e^eps * Phi(-eps/mu - mu/2).
//
// mu = +infinity is accepted everywhere and means "no noise".

#ifndef SPRIFED_PRIVACY_HPP_
#define SPRIFED_PRIVACY_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sprifed {

struct GdpGuarantee {
  double mu = 0.0;
};

struct DpGuarantee {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Budget constants of the private OMP family. sigma = 1/mu, 0 when mu = inf.
class PrivacyParams {
 public:
  // Throws ParameterError unless both are > 0. mu_p > mu_s is the usual
  // convention but not enforced.
  PrivacyParams(double mu_p, double mu_s);

  static PrivacyParams NoiseFree();

  double mu_p() const { return mu_p_; }
  double mu_s() const { return mu_s_; }
  double sigma1() const { return sigma1_; }
  double sigma2() const { return sigma2_; }

 private:
  double mu_p_;
  double mu_s_;
  double sigma1_;
  double sigma2_;
};

// Standard normal CDF via erfc.
double StandardNormalCdf(double x);

// Noise stddev for the Gaussian mechanism: sensitivity / mu.
double GaussianSigma(double l2_sensitivity, double mu);

GdpGuarantee Compose(std::span<const double> mus);

DpGuarantee GdpToDp(double mu, double epsilon);

// Largest mu whose delta(epsilon) does not exceed `delta`, by bisection to
// 1e-9 absolute.
double MuForBudget(double epsilon, double delta);

// 2 sqrt(p) X_M y_M: sensitivity of X^T y under one-row replacement.
double CorrelationSensitivity(int64_t p, double x_bound, double y_bound);

// 2 sqrt(p) X_M^2: sensitivity of X^T X_j.
double CovarianceSensitivity(int64_t p, double x_bound);

// Theoretical bound on the sensitivity of one gradient coordinate,
//   1 + 2 X_M k + 2 sqrt(s) X_M^2 (a_inf / (1 - z) + sqrt(1 + z) k / (1 - z))
// with k = kappa_eps, z = zeta (RIC of order s+1), a_inf the largest
// off-support true coefficient.
double GradientClipBound(int64_t s, double x_bound, double kappa_eps,
                         double zeta, double alpha_inf);

struct LedgerEvent {
  std::string label;
  double mu = 0.0;
};

// Append-only record of every noisy release made during one run.
class PrivacyLedger {
 public:
  void Record(std::string label, double mu);

  GdpGuarantee Total() const { return {composed_mu_}; }
  const std::vector<LedgerEvent>& events() const { return events_; }

  // Number of events whose label starts with `prefix`.
  int64_t CountWithPrefix(std::string_view prefix) const;

  // {"events":[{"label":..,"mu":..}],"total_mu":..,"epsilon":..,"delta":..}
  // Infinite mu serializes as null.
  nlohmann::json ToJson(double epsilon) const;

 private:
  std::vector<LedgerEvent> events_;
  double sum_sq_ = 0.0;
  double composed_mu_ = 0.0;
};

}  // namespace sprifed

#endif  // SPRIFED_PRIVACY_HPP_
