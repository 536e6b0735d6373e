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

#include "sprifed/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "sprifed/error.hpp"

namespace sprifed {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Noise stddev for a mu that may be infinite.
double InverseMu(double mu) { return std::isinf(mu) ? 0.0 : 1.0 / mu; }

nlohmann::json FiniteOrNull(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

PrivacyParams::PrivacyParams(double mu_p, double mu_s)
    : mu_p_(mu_p), mu_s_(mu_s) {
  if (!(mu_p > 0.0) || !(mu_s > 0.0)) {
    throw ParameterError("privacy params: mu_p and mu_s must be > 0");
  }
  sigma1_ = InverseMu(mu_p);
  sigma2_ = InverseMu(mu_s);
}

PrivacyParams PrivacyParams::NoiseFree() { return PrivacyParams(kInf, kInf); }

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double GaussianSigma(double l2_sensitivity, double mu) {
  if (!(mu > 0.0)) throw ParameterError("gaussian_sigma: mu must be > 0");
  if (!(l2_sensitivity >= 0.0)) {
    throw ParameterError("gaussian_sigma: sensitivity must be >= 0");
  }
  if (std::isinf(mu)) return 0.0;
  return l2_sensitivity / mu;
}

GdpGuarantee Compose(std::span<const double> mus) {
  double sum_sq = 0.0;
  for (double mu : mus) {
    if (!(mu >= 0.0)) throw ParameterError("compose: mu_i must be >= 0");
    sum_sq += mu * mu;
  }
  return {std::sqrt(sum_sq)};
}

DpGuarantee GdpToDp(double mu, double epsilon) {
  if (!(mu > 0.0)) throw ParameterError("gdp_to_dp: mu must be > 0");
  if (!(epsilon >= 0.0)) throw ParameterError("gdp_to_dp: epsilon must be >= 0");
  if (std::isinf(mu)) return {epsilon, 1.0};

  const double a = -epsilon / mu + mu / 2.0;
  const double b = -epsilon / mu - mu / 2.0;
  const double phi_b = StandardNormalCdf(b);
  // e^eps * Phi(b) in log space so large epsilon cannot overflow.
  const double tail = phi_b > 0.0 ? std::exp(epsilon + std::log(phi_b)) : 0.0;
  const double delta = StandardNormalCdf(a) - tail;
  return {epsilon, std::clamp(delta, 0.0, 1.0)};
}

double MuForBudget(double epsilon, double delta) {
  if (!(epsilon >= 0.0)) throw ParameterError("mu_for_budget: epsilon must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("mu_for_budget: delta must lie in (0, 1)");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (GdpToDp(hi, epsilon).delta <= delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return kInf;
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (GdpToDp(mid, epsilon).delta <= delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double CorrelationSensitivity(int64_t p, double x_bound, double y_bound) {
  if (p < 1 || !(x_bound > 0.0) || !(y_bound > 0.0)) {
    throw ParameterError("correlation_sensitivity: arguments must be positive");
  }
  return 2.0 * std::sqrt(static_cast<double>(p)) * x_bound * y_bound;
}

double CovarianceSensitivity(int64_t p, double x_bound) {
  if (p < 1 || !(x_bound > 0.0)) {
    throw ParameterError("covariance_sensitivity: arguments must be positive");
  }
  return 2.0 * std::sqrt(static_cast<double>(p)) * x_bound * x_bound;
}

double GradientClipBound(int64_t s, double x_bound, double kappa_eps,
                         double zeta, double alpha_inf) {
  if (!(zeta >= 0.0 && zeta < 1.0)) {
    throw ParameterError("gradient_clip_bound: zeta must lie in [0, 1)");
  }
  if (s < 0 || !(x_bound >= 0.0) || !(kappa_eps >= 0.0) || !(alpha_inf >= 0.0)) {
    throw ParameterError("gradient_clip_bound: arguments must be >= 0");
  }
  const double inv = 1.0 / (1.0 - zeta);
  return 1.0 + 2.0 * x_bound * kappa_eps +
         2.0 * std::sqrt(static_cast<double>(s)) * x_bound * x_bound *
             (alpha_inf * inv + std::sqrt(1.0 + zeta) * kappa_eps * inv);
}

void PrivacyLedger::Record(std::string label, double mu) {
  if (!(mu >= 0.0)) throw ParameterError("ledger: mu must be >= 0");
  events_.push_back({std::move(label), mu});
  sum_sq_ += mu * mu;
  composed_mu_ = std::sqrt(sum_sq_);
}

int64_t PrivacyLedger::CountWithPrefix(std::string_view prefix) const {
  return std::count_if(events_.begin(), events_.end(), [&](const LedgerEvent& e) {
    return std::string_view(e.label).starts_with(prefix);
  });
}

nlohmann::json PrivacyLedger::ToJson(double epsilon) const {
  nlohmann::json events = nlohmann::json::array();
  for (const LedgerEvent& e : events_) {
    events.push_back({{"label", e.label}, {"mu", FiniteOrNull(e.mu)}});
  }
  nlohmann::json j;
  j["events"] = std::move(events);
  j["total_mu"] = FiniteOrNull(composed_mu_);
  j["epsilon"] = epsilon;
  j["delta"] = composed_mu_ > 0.0 ? GdpToDp(composed_mu_, epsilon).delta : 0.0;
  return j;
}

}  // namespace sprifed
