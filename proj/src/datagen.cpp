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

#include "sprifed/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "sprifed/error.hpp"
#include "sprifed/rng.hpp"

namespace sprifed {
namespace {

constexpr uint64_t kTagX = Tag("datagen/x");
constexpr uint64_t kTagSupport = Tag("datagen/support");
constexpr uint64_t kTagCoef = Tag("datagen/coef");
constexpr uint64_t kTagNoise = Tag("datagen/noise");

void FillGaussianDesign(Matrix& x, uint64_t seed) {
  for (Index j = 0; j < x.cols(); ++j) {
    const Stream stream(DeriveKey(seed, kTagX, j));
    double* col = x.col(j).data();
    for (Index i = 0; i < x.rows(); ++i) col[i] = stream.NormalAt(i);
  }
}

// y = x * alpha + sigma * e over the support only; alpha is zero elsewhere.
Vector SparseResponse(const Matrix& x, const Vector& alpha,
                      const std::vector<Index>& support, double sigma_eps,
                      uint64_t seed) {
  Vector y = Vector::Zero(x.rows());
  for (Index j : support) y.noalias() += alpha[j] * x.col(j);
  if (sigma_eps > 0.0) {
    const Stream noise(DeriveKey(seed, kTagNoise));
    for (Index i = 0; i < y.size(); ++i) y[i] += sigma_eps * noise.NormalAt(i);
  }
  return y;
}

Dataset BuildFromModel(Index n, const Vector& alpha,
                       const std::vector<Index>& support, double sigma_eps,
                       double x_clip, double y_clip, uint64_t seed) {
  Dataset d;
  d.x.resize(n, alpha.size());
  FillGaussianDesign(d.x, seed);
  const ClipRescaleResult xr = ClipRescale(d.x, x_clip);
  d.y = SparseResponse(d.x, alpha, support, sigma_eps, seed);
  const ClipRescaleResult yr = ClipRescale(d.y, y_clip);

  d.alpha_star = alpha;
  d.support = support;
  d.x_bound = xr.effective_bound;
  d.y_bound = yr.effective_bound;
  d.x_scale = xr.scale_factor;
  d.y_scale = yr.scale_factor;
  d.x_clip = x_clip;
  d.y_clip = y_clip;
  d.sigma_eps = sigma_eps;
  d.seed = seed;
  return d;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(Trim(line.substr(start)));
      return cells;
    }
    cells.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

void AppendDouble(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

Vector Dataset::ReferenceModel() const {
  if (!alpha_star) {
    throw UnsupportedMetricError("ground-truth model is unknown for this dataset");
  }
  return *alpha_star / y_scale;
}

DiagnosticsConfig DiagnosticsConfig::Make(double sigma_eps, Index n, double p_b) {
  if (!(p_b > 0.0 && p_b < 1.0)) throw ParameterError("p_b must lie in (0, 1)");
  if (n < 1) throw ParameterError("n must be positive");
  if (!(sigma_eps >= 0.0)) throw ParameterError("sigma_eps must be >= 0");
  DiagnosticsConfig c;
  c.p_b = p_b;
  c.kappa_eps = sigma_eps * std::sqrt(2.0 * std::log(2.0 * n / p_b));
  return c;
}

ClipRescaleResult ClipRescale(std::span<double> values, double bound) {
  if (values.empty()) throw ParameterError("clip_rescale: empty input");
  if (!(bound > 0.0)) throw ParameterError("clip_rescale: bound must be > 0");

  long double sum = 0.0L;
  for (double& v : values) {
    if (std::abs(v) > bound) v = std::copysign(bound, v);
    sum += v;
  }
  const long double mean = sum / values.size();
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = static_cast<double>(std::sqrt(ss / values.size()));
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    throw DegenerateInputError("clip_rescale: input has zero variance after clipping");
  }

  ClipRescaleResult r;
  r.scale_factor = sd;
  for (double& v : values) {
    v /= sd;
    r.effective_bound = std::max(r.effective_bound, std::abs(v));
  }
  return r;
}

Dataset GenerateSynthetic(const SyntheticParams& params) {
  if (params.n < 1) throw ParameterError("generate_synthetic: n must be >= 1");
  if (params.p < 1) throw ParameterError("generate_synthetic: p must be >= 1");
  if (params.s < 1 || params.s > params.p) {
    throw ParameterError("generate_synthetic: need 0 < s <= p");
  }
  if (!(params.sigma_eps >= 0.0)) {
    throw ParameterError("generate_synthetic: sigma_eps must be >= 0");
  }
  if (!(params.coef_std >= 0.0)) {
    throw ParameterError("generate_synthetic: coef_std must be >= 0");
  }

  // Partial Fisher-Yates: the first s slots are a uniform s-subset.
  Stream pick(DeriveKey(params.seed, kTagSupport));
  std::vector<Index> order(params.p);
  std::iota(order.begin(), order.end(), Index{0});
  for (Index k = 0; k < params.s; ++k) {
    const Index j = k + static_cast<Index>(pick.UniformInt(params.p - k));
    std::swap(order[k], order[j]);
  }
  std::vector<Index> support(order.begin(), order.begin() + params.s);
  std::sort(support.begin(), support.end());

  const Stream coef(DeriveKey(params.seed, kTagCoef));
  Vector alpha = Vector::Zero(params.p);
  for (size_t k = 0; k < support.size(); ++k) {
    alpha[support[k]] = params.coef_mean + params.coef_std * coef.NormalAt(k);
  }

  return BuildFromModel(params.n, alpha, support, params.sigma_eps,
                        params.x_clip, params.y_clip, params.seed);
}

Dataset GenerateTestSet(const Dataset& train, Index n_test, uint64_t seed) {
  if (!train.alpha_star) {
    throw UnsupportedMetricError("test set needs a dataset with known ground truth");
  }
  if (n_test < 1) throw ParameterError("n_test must be >= 1");
  return BuildFromModel(n_test, *train.alpha_star, train.support,
                        train.sigma_eps, train.x_clip, train.y_clip, seed);
}

Dataset LoadCsv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  const std::vector<std::string_view> header = SplitCommas(line);

  std::vector<long> x_slot(header.size(), -1);  // column -> feature index
  long y_col = -1;
  Index p = 0;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string_view name = header[c];
    if (name == "y") {
      if (y_col >= 0) throw ParseError("duplicate column \"y\"", 1);
      y_col = static_cast<long>(c);
      continue;
    }
    long j = -1;
    if (name.size() > 2 && name.substr(0, 2) == "x_") {
      const auto* b = name.data() + 2;
      const auto* e = name.data() + name.size();
      const auto res = std::from_chars(b, e, j);
      if (res.ec != std::errc() || res.ptr != e || j < 0) j = -1;
    }
    if (j < 0) {
      throw ParseError("unknown column \"" + std::string(name) + "\"", 1);
    }
    x_slot[c] = j;
    ++p;
  }
  if (y_col < 0) throw ParseError("missing column \"y\"", 1);
  if (p == 0) throw ParseError("no feature columns x_0..x_{p-1}", 1);
  std::vector<bool> seen(p, false);
  for (long j : x_slot) {
    if (j < 0) continue;
    if (j >= p || seen[j]) {
      throw ParseError("feature columns must be exactly x_0..x_" +
                           std::to_string(p - 1),
                       1);
    }
    seen[j] = true;
  }

  std::vector<double> xs;  // row-major while reading
  std::vector<double> ys;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    const std::vector<std::string_view> cells = SplitCommas(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       row);
    }
    const size_t base = xs.size();
    xs.resize(base + p);
    for (size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto* b = cells[c].data();
      const auto* e = b + cells[c].size();
      const auto res = std::from_chars(b, e, v);
      if (cells[c].empty() || res.ec != std::errc() || res.ptr != e) {
        throw ParseError("non-numeric cell \"" + std::string(cells[c]) +
                             "\" in column \"" + std::string(header[c]) + "\"",
                         row);
      }
      if (static_cast<long>(c) == y_col) {
        ys.push_back(v);
      } else {
        xs[base + x_slot[c]] = v;
      }
    }
  }
  if (ys.empty()) throw ParseError("no data rows", row);

  Dataset d;
  const Index n = static_cast<Index>(ys.size());
  d.x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(xs.data(), n, p);
  d.y = Eigen::Map<const Vector>(ys.data(), n);
  if (options.preprocess) {
    const ClipRescaleResult xr = ClipRescale(d.x, options.x_clip);
    const ClipRescaleResult yr = ClipRescale(d.y, options.y_clip);
    d.x_bound = xr.effective_bound;
    d.y_bound = yr.effective_bound;
    d.x_scale = xr.scale_factor;
    d.y_scale = yr.scale_factor;
    d.x_clip = options.x_clip;
    d.y_clip = options.y_clip;
  } else {
    d.x_bound = d.x.cwiseAbs().maxCoeff();
    d.y_bound = d.y.cwiseAbs().maxCoeff();
  }
  return d;
}

void WriteCsv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  std::string buf;
  for (Index j = 0; j < dataset.p(); ++j) {
    buf += "x_" + std::to_string(j) + ",";
  }
  buf += "y\n";
  for (Index i = 0; i < dataset.n(); ++i) {
    for (Index j = 0; j < dataset.p(); ++j) {
      AppendDouble(buf, dataset.x(i, j));
      buf += ',';
    }
    AppendDouble(buf, dataset.y[i]);
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
  if (!out) throw IoError("write failed for " + path);
}

std::vector<ClientShard> Shard(const Dataset& dataset) {
  std::vector<ClientShard> shards;
  shards.reserve(dataset.n());
  for (Index i = 0; i < dataset.n(); ++i) {
    shards.push_back({i, dataset.x.row(i).transpose(), dataset.y[i]});
  }
  return shards;
}

}  // namespace sprifed
