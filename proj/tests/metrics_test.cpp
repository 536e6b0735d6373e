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

#include "sprifed/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sprifed/error.hpp"

namespace sprifed {
namespace {

ModelEstimate Model(std::vector<Index> support, std::vector<double> coef) {
  ModelEstimate m;
  m.support = std::move(support);
  m.alpha_hat = Eigen::Map<const Vector>(coef.data(), static_cast<Index>(coef.size()));
  return m;
}

TEST(SupportRecoveryTest, CountsIntersection) {
  EXPECT_EQ(SupportRecovery({4, 1, 9}, {1, 2, 4}), 2);
  EXPECT_EQ(SupportRecovery({}, {1, 2}), 0);
  EXPECT_EQ(SupportRecovery({3, 3, 3}, {3}), 1);
}

TEST(TestMseTest, ZeroModelIsMeanSquaredResponse) {
  const Dataset d = GenerateSynthetic({.n = 300, .p = 20, .s = 2, .seed = 3});
  const ModelEstimate zero = Model({}, {});
  EXPECT_NEAR(TestMse(zero, d), d.y.squaredNorm() / 300.0, 1e-14);
}

TEST(TestMseTest, MatchesDenseEvaluation) {
  const Dataset d = GenerateSynthetic({.n = 120, .p = 15, .s = 3, .seed = 4});
  const ModelEstimate m = Model({7, 2}, {0.5, -1.25});
  Vector a = Vector::Zero(15);
  a[7] = 0.5;
  a[2] = -1.25;
  EXPECT_NEAR(TestMse(m, d), (d.x * a - d.y).squaredNorm() / 120.0, 1e-12);
}

TEST(EstimationErrorTest, AgainstReferenceModel) {
  const Dataset d = GenerateSynthetic({.n = 80, .p = 10, .s = 2, .seed = 5});
  const Vector ref = d.ReferenceModel();
  const ModelEstimate exact =
      Model(d.support, {ref[d.support[0]], ref[d.support[1]]});
  EXPECT_LT(EstimationError(exact, d), 1e-14);
  const ModelEstimate zero = Model({}, {});
  EXPECT_NEAR(EstimationError(zero, d), ref.norm(), 1e-12);
}

TEST(EmpiricalRiskTest, ZeroAtReferenceAndOracleElsewhere) {
  const Dataset d = GenerateSynthetic({.n = 90, .p = 12, .s = 3, .sigma_eps = 0.1, .seed = 6});
  const Vector ref = d.ReferenceModel();
  std::vector<double> coef;
  for (Index j : d.support) coef.push_back(ref[j]);
  EXPECT_NEAR(EmpiricalRisk(Model(d.support, coef), d), 0.0, 1e-12);

  const ModelEstimate m = Model({0, 5}, {0.3, 0.1});
  const Vector a = m.Padded(12);
  double expected = 0.0;
  for (Index i = 0; i < d.n(); ++i) {
    const double e1 = d.x.row(i).dot(a) - d.y[i];
    const double e2 = d.x.row(i).dot(ref) - d.y[i];
    expected += e1 * e1 - e2 * e2;
  }
  EXPECT_NEAR(EmpiricalRisk(m, d), expected / 90.0, 1e-10);
}

TEST(EmpiricalRiskTest, NeedsGroundTruth) {
  Dataset d;
  d.x = Matrix::Identity(3, 3);
  d.y = Vector::Ones(3);
  EXPECT_THROW(EmpiricalRisk(Model({0}, {1.0}), d), UnsupportedMetricError);
  EXPECT_THROW(EstimationError(Model({0}, {1.0}), d), UnsupportedMetricError);
}

TEST(EstimateRicTest, TwoColumnsWithKnownCoherence) {
  Matrix x(2, 2);
  x << 1.0, 0.3, 0.0, std::sqrt(1.0 - 0.09);
  const RicEstimate r = EstimateRic(x, 2, RicMode::kExhaustive);
  EXPECT_NEAR(r.value, 0.3, 1e-12);
  EXPECT_EQ(r.subsets, 1);
  EXPECT_FALSE(r.lower_bound);
}

TEST(EstimateRicTest, ExhaustiveMatchesSvdOracle) {
  const Dataset d = GenerateSynthetic({.n = 40, .p = 10, .s = 2, .seed = 8});
  const Matrix xn = NormalizeForRic(d.x);
  for (Index k = 1; k <= 4; ++k) {
    const RicEstimate r = EstimateRic(xn, k, RicMode::kExhaustive);
    EXPECT_NEAR(r.value, oracle::Ric(xn, static_cast<int>(k)), 1e-9) << k;
  }
}

TEST(EstimateRicTest, MonotoneInOrderAndSampledIsLowerBound) {
  const Dataset d = GenerateSynthetic({.n = 60, .p = 12, .s = 2, .seed = 9});
  const Matrix xn = NormalizeForRic(d.x);
  double prev = 0.0;
  for (Index k = 1; k <= 5; ++k) {
    const double v = EstimateRic(xn, k, RicMode::kExhaustive).value;
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
  }
  const double exact = EstimateRic(xn, 3, RicMode::kExhaustive).value;
  const RicEstimate sampled = EstimateRic(xn, 3, RicMode::kSampled, 50, 1);
  EXPECT_TRUE(sampled.lower_bound);
  EXPECT_EQ(sampled.subsets, 50);
  EXPECT_LE(sampled.value, exact + 1e-12);
}

TEST(EstimateRicTest, ExhaustiveRespectsBudget) {
  const Matrix xn = Matrix::Identity(30, 30);
  EXPECT_THROW(EstimateRic(xn, 10, RicMode::kExhaustive, 1000), ParameterError);
  EXPECT_THROW(EstimateRic(xn, 0, RicMode::kSampled), ParameterError);
}

TEST(RicRecoveryBoundTest, Values) {
  EXPECT_NEAR(RicRecoveryBound(10, RecoveryVariant::kOmp), 0.0600633, 1e-7);
  EXPECT_NEAR(RicRecoveryBound(5, RecoveryVariant::kOmp), 0.07725, 1e-5);
  EXPECT_NEAR(RicRecoveryBound(4, RecoveryVariant::kGrad), 1.0 / 3.0, 1e-15);
}

TEST(CheckRecoveryConditionsTest, ReportShape) {
  const Dataset d = GenerateSynthetic({.n = 200, .p = 30, .s = 3, .seed = 10});
  const ConditionReport r =
      CheckRecoveryConditions(d, 3, PrivacyParams(0.5, 0.02),
                              DiagnosticsConfig::Make(0.001, 200, 0.05),
                              RecoveryVariant::kOmp, 200, 1);
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(r.checks[0].name, "ric");
  EXPECT_EQ(r.checks[1].name, "kappa_eps");
  EXPECT_EQ(r.checks[2].name, "sample_size");
  EXPECT_EQ(r.checks[2].status, ConditionStatus::kNotCheckable);
  EXPECT_TRUE(r.ric_is_lower_bound);
  EXPECT_DOUBLE_EQ(r.checks[0].bound, RicRecoveryBound(3, RecoveryVariant::kOmp));
  const nlohmann::json j = r.ToJson();
  EXPECT_EQ(j["checks"].size(), 3u);
}

TEST(TrialResultTest, JsonNullsForNonFinite) {
  TrialResult t;
  t.algo = "omp";
  t.test_mse = std::numeric_limits<double>::quiet_NaN();
  t.mu = std::numeric_limits<double>::infinity();
  const nlohmann::json j = t.ToJson();
  EXPECT_TRUE(j["test_mse"].is_null());
  EXPECT_TRUE(j["privacy"]["mu"].is_null());
  EXPECT_FALSE(j.contains("delta_alpha") && !j["delta_alpha"].is_null());
}

}  // namespace
}  // namespace sprifed
