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

#include "sprifed/sparse_recovery.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sprifed/error.hpp"

namespace sprifed {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Dataset Small(uint64_t seed, Index n = 200, Index p = 50, Index s = 5,
              double sigma = 0.0) {
  return GenerateSynthetic({.n = n, .p = p, .s = s, .sigma_eps = sigma, .seed = seed});
}

std::vector<Index> Sorted(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(ArgmaxAbsTest, TiesGoToLowestIndex) {
  Vector v(4);
  v << 1.0, -3.0, 3.0, 2.0;
  EXPECT_EQ(ArgmaxAbs(v, {false, false, false, false}), 1);
  EXPECT_EQ(ArgmaxAbs(v, {false, true, false, false}), 2);
  EXPECT_EQ(ArgmaxAbs(v, {true, true, true, true}), -1);
}

TEST(SolveNoisyNormalEquationsTest, RidgeOnSingularGram) {
  Matrix g(2, 2);
  g << 1.0, 1.0, 1.0, 1.0;
  Vector c(2);
  c << 1.0, 1.0;
  std::vector<std::string> flags;
  const Vector a = SolveNoisyNormalEquations(g, c, flags);
  EXPECT_THAT(flags, ::testing::ElementsAre("ridge"));
  EXPECT_TRUE(a.allFinite());
  EXPECT_NEAR(a[0] + a[1], 1.0, 1e-6);
}

TEST(OmpTest, MatchesBestSubsetOnNoiselessData) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = Small(seed, 200, 12, 3);
    const ModelEstimate est = Omp(d, 3);
    EXPECT_EQ(Sorted(est.support), oracle::BestSubset(d.x, d.y, 3)) << seed;
  }
}

TEST(OmpTest, CoefficientsAreLeastSquaresRefit) {
  const Dataset d = Small(9, 150, 30, 4, 0.01);
  const ModelEstimate est = Omp(d, 4);
  const Vector direct = oracle::LeastSquares(oracle::Columns(d.x, est.support), d.y);
  EXPECT_LT((est.alpha_hat - direct).norm(), 1e-10);
  EXPECT_EQ(est.alpha_tilde_history.size(), 4u);
  EXPECT_EQ(est.gradient_norms.size(), 4u);
  EXPECT_TRUE(est.ledger.events().empty());
}

TEST(OmpTest, SingularSelectionThrows) {
  Dataset d;
  d.x = Matrix::Zero(3, 2);
  d.x.col(0) << 1.0, 2.0, 3.0;
  d.y = d.x.col(0);
  EXPECT_THROW(Omp(d, 2), SolverError);
  EXPECT_THROW(Omp(d, 3), ParameterError);
}

TEST(PrivateOlsTest, NoiselessMatchesDirectSolve) {
  const Dataset d = Small(4, 200, 20, 4, 0.05);
  NoisySmpc smpc(1);
  PrivacyLedger ledger;
  std::vector<std::string> flags;
  PrivateOls ols(d, 4, PrivacyParams(kInf, kInf), smpc, ledger, flags);
  const std::vector<Index> feats{3, 11, 0, 17};
  Vector a;
  for (Index f : feats) a = ols.AddFeature(f);
  const Vector direct = oracle::LeastSquares(oracle::Columns(d.x, feats), d.y);
  EXPECT_LT((a - direct).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(ledger.CountWithPrefix("ols_corr"), 4);
  EXPECT_EQ(ledger.CountWithPrefix("ols_gram_row"), 4);
  EXPECT_EQ(ols.gram(), ols.gram().transpose());
}

TEST(PrivateOlsTest, EntryNoiseScalesWithSqrtS) {
  // With sigma2 = 1/mu_s the per-entry noise stddev is sqrt(s) / mu_s.
  const Dataset d = Small(5, 50, 5, 2);
  std::vector<double> diffs;
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    NoisySmpc smpc(seed);
    PrivacyLedger ledger;
    std::vector<std::string> flags;
    PrivateOls ols(d, 4, PrivacyParams(1.0, 2.0), smpc, ledger, flags);
    ols.AddFeature(0);
    diffs.push_back(ols.corr()[0] - d.x.col(0).dot(d.y));
  }
  EXPECT_NEAR(oracle::SampleVariance(diffs), 4.0 / 4.0, 0.1);
}

TEST(SprifedOmpTest, NoiseFreeVariantsReduceToOmp) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = Small(100 + seed);
    const auto ref = Omp(d, 5).support;
    const auto pp = PrivacyParams::NoiseFree();
    EXPECT_EQ(SprifedOmp(d, 5, pp, seed).support, ref);
    EXPECT_EQ(SprifedOmpNoEnhancement(d, 5, pp, seed).support, ref);
    EXPECT_EQ(SprifedOmpGrad(d, 5, pp, kInf, seed).support, ref);
  }
}

TEST(SprifedOmpTest, LedgerCounts) {
  const Dataset d = Small(3, 100, 40, 4);
  const PrivacyParams pp(0.543, 0.02);
  const ModelEstimate e = SprifedOmp(d, 4, pp, 1);
  EXPECT_EQ(e.ledger.CountWithPrefix("gamma0"), 1);
  EXPECT_EQ(e.ledger.CountWithPrefix("beta_col"), 4);
  EXPECT_EQ(e.ledger.CountWithPrefix("ols_corr"), 4);
  EXPECT_EQ(e.ledger.CountWithPrefix("ols_gram_row"), 4);
  EXPECT_NEAR(e.ledger.Total().mu, std::sqrt(5 * 0.543 * 0.543 + 8 * 0.0004), 1e-12);

  const ModelEstimate ne = SprifedOmpNoEnhancement(d, 4, pp, 1);
  EXPECT_EQ(ne.ledger.CountWithPrefix("gamma0"), 1);
  EXPECT_EQ(ne.ledger.CountWithPrefix("beta_col"), 4);
  EXPECT_EQ(ne.ledger.events().size(), 5u);

  const ModelEstimate g = SprifedOmpGrad(d, 4, pp, 1.0, 1);
  EXPECT_EQ(g.ledger.CountWithPrefix("grad["), 4);
  EXPECT_EQ(g.ledger.CountWithPrefix("ols_"), 8);
  EXPECT_THAT(g.ledger.events()[0].label, ::testing::HasSubstr("clip=1"));
}

TEST(SprifedOmpTest, DeterministicAndSeedSensitive) {
  const Dataset d = Small(12, 100, 60, 3);
  const PrivacyParams pp(0.5, 0.05);
  const ModelEstimate a = SprifedOmp(d, 3, pp, 77);
  const ModelEstimate b = SprifedOmp(d, 3, pp, 77);
  const ModelEstimate c = SprifedOmp(d, 3, pp, 78);
  EXPECT_EQ(a.support, b.support);
  EXPECT_EQ(a.alpha_hat, b.alpha_hat);
  EXPECT_NE(a.alpha_hat, c.alpha_hat);
}

TEST(SprifedOmpTest, MaskFidelityMatchesFastMode) {
  const Dataset d = Small(13, 60, 20, 3);
  const PrivacyParams pp(1.0, 0.5);
  const ModelEstimate fast = SprifedOmp(d, 3, pp, 5);
  const ModelEstimate masked = SprifedOmp(d, 3, pp, 5, {.smpc = {.mask_fidelity = true}});
  EXPECT_EQ(fast.support, masked.support);
  EXPECT_LT((fast.alpha_hat - masked.alpha_hat).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(SprifedOmpTest, JsonAndPadding) {
  const Dataset d = Small(2, 50, 10, 2);
  const ModelEstimate e = SprifedOmp(d, 2, PrivacyParams::NoiseFree(), 0);
  const Vector full = e.Padded(10);
  EXPECT_EQ(full[e.support[0]], e.alpha_hat[0]);
  EXPECT_EQ((full.array() != 0.0).count(), 2);
  const nlohmann::json j = e.ToJson(1.0);
  EXPECT_EQ(j["support"].size(), 2u);
  EXPECT_TRUE(j.contains("ledger"));
}

TEST(SprifedOmpTest, RejectsBadSparsity) {
  const Dataset d = Small(2, 50, 10, 2);
  EXPECT_THROW(SprifedOmp(d, 0, PrivacyParams(1, 1), 0), ParameterError);
  EXPECT_THROW(SprifedOmp(d, 11, PrivacyParams(1, 1), 0), ParameterError);
  EXPECT_THROW(SprifedOmpGrad(d, 2, PrivacyParams(1, 1), 0.0, 0), ParameterError);
}

}  // namespace
}  // namespace sprifed
