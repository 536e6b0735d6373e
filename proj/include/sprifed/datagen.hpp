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

// Federated datasets: synthetic generation, clip-and-rescale preprocessing,
// CSV I/O and per-client sharding.
//
// Rows are clients. Each client owns exactly one (x_i, y_i) pair.

#ifndef SPRIFED_DATAGEN_HPP_
#define SPRIFED_DATAGEN_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sprifed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

struct Dataset {
  Matrix x;  // n x p, column-major so feature columns are contiguous.
  Vector y;  // length n.

  // Generating coefficients, present only for synthetic data. They live in
  // the units of the preprocessed x: y was formed as x * alpha_star + e and
  // only then clip-rescaled.
  std::optional<Vector> alpha_star;
  std::vector<Index> support;  // ascending; empty when unknown.

  double x_bound = 0.0;  // max |x| after preprocessing.
  double y_bound = 0.0;  // max |y| after preprocessing.
  double x_scale = 1.0;  // divisor applied to clipped x.
  double y_scale = 1.0;  // divisor applied to clipped y.
  double x_clip = kNoClip;
  double y_clip = kNoClip;
  double sigma_eps = 0.0;
  uint64_t seed = 0;

  Index n() const { return x.rows(); }
  Index p() const { return x.cols(); }
  bool has_ground_truth() const { return alpha_star.has_value(); }

  // alpha_star mapped through the response rescaling, i.e. the model that
  // generated the preprocessed y before clipping. Throws
  // UnsupportedMetricError when the ground truth is unknown.
  Vector ReferenceModel() const;
};

struct ClientShard {
  Index client_index = 0;
  Vector x_row;
  double y_value = 0.0;
};

struct DiagnosticsConfig {
  double p_b = 0.05;
  double kappa_eps = 0.0;

  // kappa_eps = sigma_eps * sqrt(2 log(2n / p_b)).
  static DiagnosticsConfig Make(double sigma_eps, Index n, double p_b);
};

struct ClipRescaleResult {
  double scale_factor = 1.0;    // population std of the clipped values.
  double effective_bound = 0.0;  // max |value| after rescaling.
};

// Clips entries with |v| > bound to +-bound, then divides everything by the
// population standard deviation of the clipped values. Operates on the whole
// object as one flat array. Throws DegenerateInputError when the clipped
// values have zero variance and ParameterError on bound <= 0 or empty input.
ClipRescaleResult ClipRescale(std::span<double> values, double bound);

inline ClipRescaleResult ClipRescale(Matrix& m, double bound) {
  return ClipRescale(std::span<double>(m.data(), m.size()), bound);
}
inline ClipRescaleResult ClipRescale(Vector& v, double bound) {
  return ClipRescale(std::span<double>(v.data(), v.size()), bound);
}

struct SyntheticParams {
  Index n = 0;
  Index p = 0;
  Index s = 0;
  double sigma_eps = 0.001;
  double coef_mean = 2.0;
  double coef_std = 1.0;
  uint64_t seed = 0;
  double x_clip = 1.0;
  double y_clip = 1.0;
};

// x ~ N(0,1) i.i.d. then clip-rescaled; support uniform without replacement;
// nonzero coefficients ~ N(coef_mean, coef_std^2); y = x alpha + e with
// e ~ N(0, sigma_eps^2), then clip-rescaled. Deterministic in `seed`.
Dataset GenerateSynthetic(const SyntheticParams& params);

// Fresh rows from the same ground truth and preprocessing settings as `train`.
Dataset GenerateTestSet(const Dataset& train, Index n_test, uint64_t seed);

struct LoadOptions {
  double x_clip = 1.0;
  double y_clip = 1.0;
  bool preprocess = true;
};

// Reads `x_0,...,x_{p-1},y` CSV. Columns may appear in any order but every
// x_j for j < p and y must be present exactly once.
Dataset LoadCsv(const std::string& path, const LoadOptions& options = {});

// Writes x and y with round-trip precision. Ground truth is not written.
void WriteCsv(const Dataset& dataset, const std::string& path);

std::vector<ClientShard> Shard(const Dataset& dataset);

}  // namespace sprifed

#endif  // SPRIFED_DATAGEN_HPP_
