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

#include "sprifed/secureagg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sprifed/error.hpp"
#include "sprifed/rng.hpp"

namespace sprifed {
namespace {

constexpr uint64_t kTagClientNoise = Tag("smpc/client-noise");
constexpr uint64_t kTagMask = Tag("smpc/mask");
constexpr Index kPairwiseThreshold = 4096;

double PairwiseSum(std::span<const double> v) {
  if (v.size() <= 64) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const size_t half = v.size() / 2;
  return PairwiseSum(v.first(half)) + PairwiseSum(v.subspan(half));
}

}  // namespace

double MaskMatrix::At(Index i, Index j) const {
  if (i == j) return 0.0;
  const Index lo = std::min(i, j);
  const Index hi = std::max(i, j);
  const Stream stream(key_);
  // Signed 24-bit integer scaled by 2^-20.
  const uint64_t bits = stream.BitsAt(static_cast<uint64_t>(lo) * n_ + hi);
  const double m = static_cast<double>(static_cast<int64_t>(bits >> 40) -
                                       (int64_t{1} << 23)) *
                   0x1.0p-20;
  return i < j ? m : -m;
}

double MaskMatrix::RowSum(Index i) const {
  double s = 0.0;
  for (Index j = 0; j < n_; ++j) s += At(i, j);
  return s;
}

double FixedOrderSum(std::span<const double> values) {
  if (static_cast<Index>(values.size()) > kPairwiseThreshold) {
    return PairwiseSum(values);
  }
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double NoisySmpc::ClientNoise(uint64_t release, Index client, Index n,
                              double sigma0) const {
  if (sigma0 == 0.0) return 0.0;
  const double per_client_sigma = sigma0 / std::sqrt(static_cast<double>(n));
  return per_client_sigma *
         Stream(DeriveKey(seed_, kTagClientNoise, release)).NormalAt(client);
}

double NoisySmpc::AggregateMessages(std::span<double> values, double sigma0) {
  const uint64_t release = next_release_++;
  const Index n = static_cast<Index>(values.size());
  if (sigma0 > 0.0) {
    const Stream noise(DeriveKey(seed_, kTagClientNoise, release));
    const double per_client_sigma = sigma0 / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < n; ++i) values[i] += per_client_sigma * noise.NormalAt(i);
  }
  if (options_.mask_fidelity) {
    const MaskMatrix masks(n, DeriveKey(seed_, kTagMask, release));
    for (Index i = 0; i < n; ++i) values[i] += masks.RowSum(i);
  }
  return FixedOrderSum(values);
}

AggregateResult NoisySmpc::SecureSum(std::span<const double> contributions,
                                     double sigma0) {
  if (contributions.empty()) throw ParameterError("noisy_smpc: no participants");
  if (!(sigma0 >= 0.0)) throw ParameterError("noisy_smpc: sigma0 must be >= 0");
  std::vector<double> messages(contributions.begin(), contributions.end());
  const double value = AggregateMessages(messages, sigma0);
  return {value, sigma0, static_cast<Index>(contributions.size())};
}

AggregateResult NoisySmpc::Dot(std::span<const double> a, std::span<const double> b,
                               double sigma0) {
  if (a.size() != b.size()) throw ParameterError("noisy_smpc: length mismatch");
  std::vector<double> products(a.size());
  for (size_t i = 0; i < a.size(); ++i) products[i] = a[i] * b[i];
  return SecureSum(products, sigma0);
}

Vector NoisySmpc::DotColumns(const Matrix& x, const Vector& b, double sigma0,
                             double per_client_clip) {
  if (x.rows() != b.size()) throw ParameterError("noisy_smpc: length mismatch");
  if (x.rows() == 0) throw ParameterError("noisy_smpc: no participants");
  if (!(sigma0 >= 0.0)) throw ParameterError("noisy_smpc: sigma0 must be >= 0");
  if (!(per_client_clip > 0.0)) {
    throw ParameterError("noisy_smpc: per-client clip must be > 0");
  }
  const bool clip = std::isfinite(per_client_clip);
  const Index n = x.rows();
  Vector out(x.cols());
  std::vector<double> messages(n);
  for (Index k = 0; k < x.cols(); ++k) {
    const double* col = x.col(k).data();
    for (Index i = 0; i < n; ++i) {
      const double v = col[i] * b[i];
      messages[i] = clip ? std::clamp(v, -per_client_clip, per_client_clip) : v;
    }
    out[k] = AggregateMessages(messages, sigma0);
  }
  return out;
}

}  // namespace sprifed
