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

#include "sprifed/sprifed.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sprifed/error.hpp"
#include "sprifed/harness.hpp"

struct sprifed_dataset {
  sprifed::Dataset data;
};

struct sprifed_model {
  sprifed::ModelEstimate estimate;
};

namespace {

thread_local std::string g_last_error;

sprifed_status Fail(sprifed_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
sprifed_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SPRIFED_OK;
  } catch (const sprifed::Error& e) {
    return Fail(static_cast<sprifed_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SPRIFED_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SPRIFED_ERR_INTERNAL, e.what());
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) throw sprifed::ParameterError(std::string(what) + " is null");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename T, typename Src>
void CopyOut(const Src& src, T* out, int64_t capacity, int64_t* count) {
  Require(count, "count");
  if (capacity < 0) throw sprifed::ParameterError("capacity must be >= 0");
  const int64_t size = static_cast<int64_t>(src.size());
  if (capacity > 0) Require(out, "out");
  for (int64_t i = 0; i < std::min(size, capacity); ++i) {
    out[i] = static_cast<T>(src[i]);
  }
  *count = size;
}

void RunExperiment(const char* config_path, const char* output,
                   const std::function<void(const sprifed::ExperimentConfig&)>& go) {
  Require(config_path, "config_path");
  sprifed::ExperimentConfig config = sprifed::LoadExperimentConfig(config_path);
  sprifed::ApplySeedOverride(config, std::getenv("SPRIFED_SEED"));
  if (output != nullptr) config.output = output;
  go(config);
}

}  // namespace

extern "C" {

const char* sprifed_version(void) { return "1.0.0"; }

const char* sprifed_last_error(void) { return g_last_error.c_str(); }

void sprifed_string_free(char* s) { std::free(s); }

void sprifed_synthetic_params_init(sprifed_synthetic_params* params) {
  if (params == nullptr) return;
  const sprifed::SyntheticParams d;
  *params = {};
  params->sigma_eps = d.sigma_eps;
  params->coef_mean = d.coef_mean;
  params->coef_std = d.coef_std;
  params->x_clip = d.x_clip;
  params->y_clip = d.y_clip;
}

sprifed_status sprifed_dataset_generate(const sprifed_synthetic_params* params,
                                        sprifed_dataset** out) {
  return Guard([&] {
    Require(params, "params");
    Require(out, "out");
    sprifed::SyntheticParams sp;
    sp.n = params->n;
    sp.p = params->p;
    sp.s = params->s;
    sp.sigma_eps = params->sigma_eps;
    sp.coef_mean = params->coef_mean;
    sp.coef_std = params->coef_std;
    sp.seed = params->seed;
    sp.x_clip = params->x_clip;
    sp.y_clip = params->y_clip;
    *out = new sprifed_dataset{sprifed::GenerateSynthetic(sp)};
  });
}

sprifed_status sprifed_dataset_generate_test(const sprifed_dataset* train,
                                             int64_t n_test, uint64_t seed,
                                             sprifed_dataset** out) {
  return Guard([&] {
    Require(train, "train");
    Require(out, "out");
    *out = new sprifed_dataset{sprifed::GenerateTestSet(train->data, n_test, seed)};
  });
}

sprifed_status sprifed_dataset_load_csv(const char* path, double x_clip,
                                        double y_clip, int preprocess,
                                        sprifed_dataset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    sprifed::LoadOptions opts;
    opts.x_clip = x_clip;
    opts.y_clip = y_clip;
    opts.preprocess = preprocess != 0;
    *out = new sprifed_dataset{sprifed::LoadCsv(path, opts)};
  });
}

sprifed_status sprifed_dataset_write_csv(const sprifed_dataset* dataset,
                                         const char* path) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(path, "path");
    sprifed::WriteCsv(dataset->data, path);
  });
}

int64_t sprifed_dataset_n(const sprifed_dataset* dataset) {
  return dataset ? dataset->data.n() : -1;
}

int64_t sprifed_dataset_p(const sprifed_dataset* dataset) {
  return dataset ? dataset->data.p() : -1;
}

sprifed_status sprifed_dataset_support(const sprifed_dataset* dataset, int64_t* out,
                                       int64_t capacity, int64_t* count) {
  return Guard([&] {
    Require(dataset, "dataset");
    CopyOut(dataset->data.support, out, capacity, count);
  });
}

void sprifed_dataset_free(sprifed_dataset* dataset) { delete dataset; }

sprifed_status sprifed_gdp_compose(const double* mus, size_t count, double* mu_out) {
  return Guard([&] {
    if (count > 0) Require(mus, "mus");
    Require(mu_out, "mu_out");
    *mu_out = sprifed::Compose(std::span<const double>(mus, count)).mu;
  });
}

sprifed_status sprifed_gdp_to_dp(double mu, double epsilon, double* delta_out) {
  return Guard([&] {
    Require(delta_out, "delta_out");
    *delta_out = sprifed::GdpToDp(mu, epsilon).delta;
  });
}

sprifed_status sprifed_mu_for_budget(double epsilon, double delta, double* mu_out) {
  return Guard([&] {
    Require(mu_out, "mu_out");
    *mu_out = sprifed::MuForBudget(epsilon, delta);
  });
}

void sprifed_run_options_init(sprifed_run_options* options) {
  if (options == nullptr) return;
  *options = {};
  options->algo = "sprifed_omp";
  options->mu_p = 0.543;
  options->mu_s = 0.02;
  options->clip_bound = 1.0;
}

sprifed_status sprifed_run(const sprifed_dataset* dataset,
                           const sprifed_run_options* options, sprifed_model** out) {
  return Guard([&] {
    Require(dataset, "dataset");
    Require(options, "options");
    Require(options->algo, "options->algo");
    Require(out, "out");
    if (!sprifed::IsKnownAlgorithm(options->algo)) {
      throw sprifed::ParameterError(std::string("unknown algorithm \"") +
                                    options->algo + "\"");
    }
    sprifed::ExperimentConfig config;
    config.s = options->s;
    config.algos = {options->algo};
    config.mu_p = options->mu_p;
    config.mu_s = options->mu_s;
    config.clip_bound = options->clip_bound;
    config.mask_fidelity = options->mask_fidelity != 0;
    for (const char* algo : {"dp_sgd_l1", "dp_gcd"}) {
      sprifed::BaselineSettings b;
      b.algo = algo;
      if (options->learning_rate != 0.0) b.learning_rate = options->learning_rate;
      if (options->l1_coef != 0.0) b.l1_coef = options->l1_coef;
      if (options->mu_step != 0.0) b.mu_step = options->mu_step;
      if (options->baseline_clip != 0.0) b.clip_bound = options->baseline_clip;
      if (options->total_steps != 0) b.total_steps = options->total_steps;
      config.baselines.push_back(b);
    }
    *out = new sprifed_model{
        sprifed::RunAlgorithm(options->algo, config, dataset->data, options->seed)};
  });
}

sprifed_status sprifed_model_support(const sprifed_model* model, int64_t* out,
                                     int64_t capacity, int64_t* count) {
  return Guard([&] {
    Require(model, "model");
    CopyOut(model->estimate.support, out, capacity, count);
  });
}

sprifed_status sprifed_model_coefficients(const sprifed_model* model, double* out,
                                          int64_t capacity, int64_t* count) {
  return Guard([&] {
    Require(model, "model");
    const auto& a = model->estimate.alpha_hat;
    CopyOut(std::vector<double>(a.data(), a.data() + a.size()), out, capacity, count);
  });
}

sprifed_status sprifed_model_ledger_mu(const sprifed_model* model, double* mu_out) {
  return Guard([&] {
    Require(model, "model");
    Require(mu_out, "mu_out");
    *mu_out = model->estimate.ledger.Total().mu;
  });
}

sprifed_status sprifed_model_to_json(const sprifed_model* model, double epsilon,
                                     char** json_out) {
  return Guard([&] {
    Require(model, "model");
    Require(json_out, "json_out");
    *json_out = CopyString(model->estimate.ToJson(epsilon).dump());
  });
}

sprifed_status sprifed_model_test_mse(const sprifed_model* model,
                                      const sprifed_dataset* test_set, double* out) {
  return Guard([&] {
    Require(model, "model");
    Require(test_set, "test_set");
    Require(out, "out");
    *out = sprifed::TestMse(model->estimate, test_set->data);
  });
}

sprifed_status sprifed_model_estimation_error(const sprifed_model* model,
                                              const sprifed_dataset* dataset,
                                              double* out) {
  return Guard([&] {
    Require(model, "model");
    Require(dataset, "dataset");
    Require(out, "out");
    *out = sprifed::EstimationError(model->estimate, dataset->data);
  });
}

sprifed_status sprifed_model_empirical_risk(const sprifed_model* model,
                                            const sprifed_dataset* dataset,
                                            double* out) {
  return Guard([&] {
    Require(model, "model");
    Require(dataset, "dataset");
    Require(out, "out");
    *out = sprifed::EmpiricalRisk(model->estimate, dataset->data);
  });
}

void sprifed_model_free(sprifed_model* model) { delete model; }

sprifed_status sprifed_experiment_run(const char* config_path, int jobs,
                                      const char* output) {
  return Guard([&] {
    RunExperiment(config_path, output, [&](const sprifed::ExperimentConfig& c) {
      sprifed::Run(c, jobs);
    });
  });
}

sprifed_status sprifed_experiment_sweep(const char* config_path, const char* axis,
                                        const double* values, size_t count, int jobs,
                                        const char* output) {
  return Guard([&] {
    Require(axis, "axis");
    if (count > 0) Require(values, "values");
    const std::vector<double> v(values, values + count);
    RunExperiment(config_path, output, [&](const sprifed::ExperimentConfig& c) {
      sprifed::Sweep(c, axis, v, jobs);
    });
  });
}

sprifed_status sprifed_experiment_report(const char* results_path,
                                         const char* csv_path, char** table_out) {
  return Guard([&] {
    Require(results_path, "results_path");
    const sprifed::Report report = sprifed::SummarizeFile(results_path);
    if (csv_path != nullptr) {
      std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
      if (!out) throw sprifed::IoError(std::string("cannot write \"") + csv_path + "\"");
      out << report.csv;
      if (!out) throw sprifed::IoError(std::string("write failed for \"") + csv_path + "\"");
    }
    if (table_out != nullptr) *table_out = CopyString(report.table);
  });
}

}  // extern "C"
