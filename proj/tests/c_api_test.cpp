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

// Exercises the shared library through its public C header only.

#include "sprifed/sprifed.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sprifed_capi_" + name)).string();
}

sprifed_dataset* Generate(int64_t n, int64_t p, int64_t s, uint64_t seed,
                          double clip = 1.0) {
  sprifed_synthetic_params params;
  sprifed_synthetic_params_init(&params);
  params.x_clip = clip;
  params.y_clip = clip;
  params.n = n;
  params.p = p;
  params.s = s;
  params.seed = seed;
  sprifed_dataset* ds = nullptr;
  EXPECT_EQ(sprifed_dataset_generate(&params, &ds), SPRIFED_OK);
  return ds;
}

TEST(CApiTest, VersionIsNonEmpty) { EXPECT_GT(std::string(sprifed_version()).size(), 0u); }

TEST(CApiTest, DatasetLifecycle) {
  sprifed_dataset* ds = Generate(50, 30, 4, 3);
  ASSERT_NE(ds, nullptr);
  EXPECT_EQ(sprifed_dataset_n(ds), 50);
  EXPECT_EQ(sprifed_dataset_p(ds), 30);
  int64_t support[2];
  int64_t count = 0;
  ASSERT_EQ(sprifed_dataset_support(ds, support, 2, &count), SPRIFED_OK);
  EXPECT_EQ(count, 4);
  EXPECT_LT(support[0], support[1]);
  sprifed_dataset_free(ds);
}

TEST(CApiTest, ParameterErrorsSetLastError) {
  sprifed_synthetic_params params;
  sprifed_synthetic_params_init(&params);
  params.n = 5;
  params.p = 3;
  params.s = 4;
  sprifed_dataset* ds = nullptr;
  EXPECT_EQ(sprifed_dataset_generate(&params, &ds), SPRIFED_ERR_PARAMETER);
  EXPECT_EQ(ds, nullptr);
  EXPECT_GT(std::string(sprifed_last_error()).size(), 0u);
  EXPECT_EQ(sprifed_dataset_generate(nullptr, &ds), SPRIFED_ERR_PARAMETER);
}

TEST(CApiTest, CsvRoundTripAndErrors) {
  sprifed_dataset* ds = Generate(20, 5, 2, 1);
  const std::string path = TempPath("rt.csv");
  ASSERT_EQ(sprifed_dataset_write_csv(ds, path.c_str()), SPRIFED_OK);
  sprifed_dataset* back = nullptr;
  ASSERT_EQ(sprifed_dataset_load_csv(path.c_str(), 1.0, 1.0, 0, &back), SPRIFED_OK);
  EXPECT_EQ(sprifed_dataset_n(back), 20);
  EXPECT_EQ(sprifed_dataset_p(back), 5);
  int64_t count = -1;
  EXPECT_EQ(sprifed_dataset_support(back, nullptr, 0, &count), SPRIFED_OK);
  EXPECT_EQ(count, 0);
  sprifed_dataset_free(back);
  sprifed_dataset_free(ds);

  std::ofstream(path) << "x_0,y\n1,oops\n";
  EXPECT_EQ(sprifed_dataset_load_csv(path.c_str(), 1.0, 1.0, 1, &back),
            SPRIFED_ERR_PARSE);
  std::remove(path.c_str());
  EXPECT_EQ(sprifed_dataset_load_csv(path.c_str(), 1.0, 1.0, 1, &back), SPRIFED_ERR_IO);
}

TEST(CApiTest, PrivacyAccounting) {
  const double mus[] = {0.6, 0.8};
  double mu = 0.0;
  ASSERT_EQ(sprifed_gdp_compose(mus, 2, &mu), SPRIFED_OK);
  EXPECT_NEAR(mu, 1.0, 1e-12);
  double delta = 0.0;
  ASSERT_EQ(sprifed_gdp_to_dp(1.0, 0.0, &delta), SPRIFED_OK);
  EXPECT_NEAR(delta, 0.38292492254802624, 1e-12);
  ASSERT_EQ(sprifed_mu_for_budget(5.34, 1e-4, &mu), SPRIFED_OK);
  EXPECT_NEAR(mu, 1.3265202116786814, 1e-9);
  EXPECT_EQ(sprifed_gdp_to_dp(-1.0, 0.0, &delta), SPRIFED_ERR_PARAMETER);
}

TEST(CApiTest, RunAndEvaluate) {
  // Rescale-only preprocessing keeps the reference model exact.
  sprifed_dataset* ds = Generate(300, 60, 3, 7, INFINITY);
  sprifed_dataset* test = nullptr;
  ASSERT_EQ(sprifed_dataset_generate_test(ds, 200, 8, &test), SPRIFED_OK);

  sprifed_run_options opts;
  sprifed_run_options_init(&opts);
  opts.s = 3;
  opts.mu_p = INFINITY;
  opts.mu_s = INFINITY;
  opts.seed = 1;
  sprifed_model* model = nullptr;
  ASSERT_EQ(sprifed_run(ds, &opts, &model), SPRIFED_OK) << sprifed_last_error();

  int64_t truth[3], got[3], count = 0;
  sprifed_dataset_support(ds, truth, 3, &count);
  ASSERT_EQ(sprifed_model_support(model, got, 3, &count), SPRIFED_OK);
  ASSERT_EQ(count, 3);
  std::vector<int64_t> a(got, got + 3), b(truth, truth + 3);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, b);

  double coef[3];
  EXPECT_EQ(sprifed_model_coefficients(model, coef, 3, &count), SPRIFED_OK);
  double mse = -1.0, err = -1.0, risk = 0.0, mu = -1.0;
  EXPECT_EQ(sprifed_model_test_mse(model, test, &mse), SPRIFED_OK);
  EXPECT_GE(mse, 0.0);
  EXPECT_EQ(sprifed_model_estimation_error(model, ds, &err), SPRIFED_OK);
  EXPECT_LT(err, 1e-2);
  EXPECT_EQ(sprifed_model_empirical_risk(model, ds, &risk), SPRIFED_OK);
  EXPECT_EQ(sprifed_model_ledger_mu(model, &mu), SPRIFED_OK);
  EXPECT_TRUE(std::isinf(mu));

  char* json = nullptr;
  ASSERT_EQ(sprifed_model_to_json(model, 1.0, &json), SPRIFED_OK);
  EXPECT_NE(std::string(json).find("\"support\""), std::string::npos);
  sprifed_string_free(json);

  sprifed_model_free(model);
  sprifed_dataset_free(test);
  sprifed_dataset_free(ds);
}

TEST(CApiTest, UnknownAlgorithmIsUsageOrParameterError) {
  sprifed_dataset* ds = Generate(20, 5, 2, 1);
  sprifed_run_options opts;
  sprifed_run_options_init(&opts);
  opts.s = 2;
  opts.algo = "lasso";
  sprifed_model* model = nullptr;
  const sprifed_status st = sprifed_run(ds, &opts, &model);
  EXPECT_TRUE(st == SPRIFED_ERR_USAGE || st == SPRIFED_ERR_PARAMETER) << st;
  EXPECT_EQ(model, nullptr);
  sprifed_dataset_free(ds);
}

TEST(CApiTest, ExperimentRunAndReport) {
  const std::string cfg = TempPath("exp.toml");
  const std::string out = TempPath("exp.jsonl");
  const std::string csv = TempPath("exp.csv");
  std::ofstream(cfg) << "n = 80\np = 30\ns = 2\nn_test = 50\n"
                        "algos = [\"omp\", \"sprifed_omp\"]\nmu_p = 1.0\n"
                        "trials = 2\nmaster_seed = 3\n";
  ASSERT_EQ(sprifed_experiment_run(cfg.c_str(), 1, out.c_str()), SPRIFED_OK)
      << sprifed_last_error();
  char* table = nullptr;
  ASSERT_EQ(sprifed_experiment_report(out.c_str(), csv.c_str(), &table), SPRIFED_OK);
  EXPECT_NE(std::string(table).find("sprifed_omp"), std::string::npos);
  sprifed_string_free(table);
  EXPECT_TRUE(std::filesystem::exists(csv));

  const double values[] = {2, 3};
  ASSERT_EQ(sprifed_experiment_sweep(cfg.c_str(), "s", values, 2, 1, out.c_str()),
            SPRIFED_OK);
  EXPECT_EQ(sprifed_experiment_sweep(cfg.c_str(), "lambda", values, 2, 1, out.c_str()),
            SPRIFED_ERR_USAGE);

  std::ofstream(cfg) << "n = 80\nfoo = 1\n";
  EXPECT_EQ(sprifed_experiment_run(cfg.c_str(), 1, out.c_str()), SPRIFED_ERR_USAGE);
  for (const auto& f : {cfg, out, csv}) std::remove(f.c_str());
}

}  // namespace
