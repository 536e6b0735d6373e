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

// Simulated noisy secure aggregation.
//
// For one scalar release each client i sends q_i = c_i + eta_i with
// eta_i ~ N(0, sigma0^2 / n). The server only learns sum_i q_i, whose noise is
// exactly N(0, sigma0^2). In mask-fidelity mode every client additionally adds
// its row of an antisymmetric pairwise mask matrix, which cancels in the sum.

#ifndef SPRIFED_SECUREAGG_HPP_
#define SPRIFED_SECUREAGG_HPP_

#include <cstdint>
#include <limits>
#include <span>

#include "sprifed/datagen.hpp"

namespace sprifed {

struct AggregateResult {
  double value = 0.0;
  double sigma0 = 0.0;
  Index n_participants = 0;
};

// Pairwise masks for one release, generated on demand from a key. Entries are
// dyadic rationals (multiples of 2^-20 below 8 in magnitude) so row sums
// are exact in double precision and cancel to exactly zero.
class MaskMatrix {
 public:
  MaskMatrix(Index n, uint64_t key) : n_(n), key_(key) {}

  Index n() const { return n_; }

  // m[i][j] for i != j; m[j][i] == -m[i][j]; m[i][i] == 0.
  double At(Index i, Index j) const;

  // sum over j != i of m[i][j], accumulated in ascending j.
  double RowSum(Index i) const;

 private:
  Index n_;
  uint64_t key_;
};

// Server-side sum of client messages in a fixed order: sequential for
// n <= 4096, pairwise above.
double FixedOrderSum(std::span<const double> values);

class NoisySmpc {
 public:
  struct Options {
    bool mask_fidelity = false;
  };

  explicit NoisySmpc(uint64_t seed) : NoisySmpc(seed, Options{}) {}
  NoisySmpc(uint64_t seed, Options options) : seed_(seed), options_(options) {}

  // One release of sum_i contributions[i] + N(0, sigma0^2).
  AggregateResult SecureSum(std::span<const double> contributions, double sigma0);

  // sum_i a_i b_i + N(0, sigma0^2). Throws ParameterError on length mismatch.
  AggregateResult Dot(std::span<const double> a, std::span<const double> b,
                      double sigma0);

  // One independent release per column k:
  //   sum_i clip(x(i,k) * b_i, per_client_clip) + N(0, sigma0^2).
  // Clipping is to [-per_client_clip, per_client_clip]; infinity disables it.
  Vector DotColumns(const Matrix& x, const Vector& b, double sigma0,
                    double per_client_clip = std::numeric_limits<double>::infinity());

  // eta_i of client `client` in release `release` among n participants.
  double ClientNoise(uint64_t release, Index client, Index n, double sigma0) const;

  // Number of scalar releases issued so far. Release ids are sequential.
  uint64_t releases() const { return next_release_; }
  bool mask_fidelity() const { return options_.mask_fidelity; }

 private:
  // Aggregates q_i = values[i] + eta_i (+ masks) for the next release id.
  // `values` is overwritten with the client messages.
  double AggregateMessages(std::span<double> values, double sigma0);

  uint64_t seed_;
  Options options_;
  uint64_t next_release_ = 0;
};

}  // namespace sprifed

#endif  // SPRIFED_SECUREAGG_HPP_
