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

// Reference computations used only by tests. They deliberately take
// different numerical routes from the library (QR and SVD instead of normal
// equations and symmetric eigensolvers, bitmask enumeration instead of
// lexicographic combinations).

#ifndef SPRIFED_TESTS_ORACLES_HPP_
#define SPRIFED_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace sprifed::oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix Columns(const Matrix& x, const std::vector<Eigen::Index>& cols) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) out.col(k) = x.col(cols[k]);
  return out;
}

// Least squares by column-pivoted Householder QR.
inline Vector LeastSquares(const Matrix& a, const Vector& b) {
  return a.colPivHouseholderQr().solve(b);
}

// Every k-subset of {0..p-1} as a bitmask, p <= 63.
template <typename F>
void ForEachSubset(int p, int k, F&& f) {
  std::vector<Eigen::Index> cols;
  for (uint64_t mask = 0; mask < (uint64_t{1} << p); ++mask) {
    if (__builtin_popcountll(mask) != k) continue;
    cols.clear();
    for (int j = 0; j < p; ++j) {
      if (mask >> j & 1) cols.push_back(j);
    }
    f(cols);
  }
}

// Support of the best s-subset least-squares fit, ascending.
inline std::vector<Eigen::Index> BestSubset(const Matrix& x, const Vector& y, int s) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> arg;
  ForEachSubset(static_cast<int>(x.cols()), s, [&](const std::vector<Eigen::Index>& c) {
    const Matrix xs = Columns(x, c);
    const double rss = (y - xs * LeastSquares(xs, y)).squaredNorm();
    if (rss < best) {
      best = rss;
      arg = c;
    }
  });
  return arg;
}

// RIC of order k of an already normalized matrix, from singular values of
// every n x k column block.
inline double Ric(const Matrix& xn, int k) {
  double zeta = 0.0;
  ForEachSubset(static_cast<int>(xn.cols()), k, [&](const std::vector<Eigen::Index>& c) {
    const Eigen::JacobiSVD<Matrix> svd(Columns(xn, c));
    const Vector& sv = svd.singularValues();  // descending
    const double hi = sv[0] * sv[0];
    const double lo = sv[sv.size() - 1] * sv[sv.size() - 1];
    zeta = std::max({zeta, hi - 1.0, 1.0 - lo});
  });
  return zeta;
}

inline double SampleVariance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

// Ordinary least-squares slope of y on x.
inline double Slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace sprifed::oracle

#endif  // SPRIFED_TESTS_ORACLES_HPP_
