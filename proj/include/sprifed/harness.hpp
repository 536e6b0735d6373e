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

// Experiment harness: TOML configuration, seeded multi-trial runs, one-axis
// sweeps and summary reports.
//
// Algorithm names: omp, sprifed_omp, sprifed_omp_no_enhancement,
// sprifed_omp_grad, dp_sgd_l1, dp_gcd.

#ifndef SPRIFED_HARNESS_HPP_
#define SPRIFED_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sprifed/baselines.hpp"
#include "sprifed/datagen.hpp"
#include "sprifed/metrics.hpp"
#include "sprifed/privacy.hpp"
#include "sprifed/sparse_recovery.hpp"

namespace sprifed {

// One [[baseline]] table. Unset fields fall back to harness defaults.
struct BaselineSettings {
  std::string algo;
  std::optional<double> learning_rate;
  std::optional<double> l1_coef;
  std::optional<double> clip_bound;
  std::optional<double> mu_step;
  std::optional<int64_t> total_steps;
};

struct ExperimentConfig {
  // Synthetic source.
  Index n = 0;
  Index p = 0;
  Index s = 0;
  double sigma_eps = 0.001;
  double coef_mean = 2.0;
  double coef_std = 1.0;
  double x_clip = 1.0;
  double y_clip = 1.0;
  Index n_test = 1000;
  // CSV source (mutually exclusive with n and p; s is still required).
  std::optional<std::string> csv_path;

  std::vector<std::string> algos;
  std::optional<double> mu_p;
  std::optional<double> mu_s;
  std::optional<double> epsilon;
  std::optional<double> delta;
  double clip_bound = 1.0;  // SPriFed-OMP-GRAD per-client clip.
  bool mask_fidelity = false;

  int64_t trials = 1;
  uint64_t master_seed = 0;
  std::string output = "results.jsonl";
  bool record_runtime = false;
  std::vector<BaselineSettings> baselines;

  // Throws UsageError on an invalid combination.
  void Validate() const;
};

// Throws UsageError on syntax errors, unknown keys or wrong value types.
ExperimentConfig ParseExperimentConfig(std::string_view toml_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Replaces master_seed with the decimal value of `env_value` when non-null.
void ApplySeedOverride(ExperimentConfig& config, const char* env_value);

bool IsKnownAlgorithm(std::string_view algo);

// (mu_p, mu_s) used by `algo`. Explicit mu_p wins; otherwise mu_p is solved
// from the (epsilon, delta) target and the algorithm's event counts.
// mu_s defaults to 0.02.
PrivacyParams ResolvePrivacy(const ExperimentConfig& config, std::string_view algo);

// Composed mu of one SPriFed-OMP run under `config`: the budget the
// baselines are matched to.
double ReferenceBudgetMu(const ExperimentConfig& config);

// Runs one algorithm on `dataset` with settings from `config`.
ModelEstimate RunAlgorithm(std::string_view algo, const ExperimentConfig& config,
                           const Dataset& dataset, uint64_t seed);

// Seed of trial t's dataset.
uint64_t TrialSeed(uint64_t master_seed, int64_t trial);

// Runs every (config, trial) pair on up to `jobs` threads. Results come back
// ordered by (config index, trial, algo position). Numerical failures are
// flagged on the row instead of aborting.
std::vector<TrialResult> RunTrials(const std::vector<ExperimentConfig>& configs,
                                   int jobs);

// One JSON object per line, annotated with the config fields.
std::string ToJsonLines(const std::vector<ExperimentConfig>& configs,
                        const std::vector<TrialResult>& results);

// RunTrials over one config and write its output file.
std::vector<TrialResult> Run(const ExperimentConfig& config, int jobs);

// Copies of `base` with `axis` set to each value. Axes: n, p, s, sigma_eps,
// mu_p, mu_s, epsilon, clip_bound. Throws UsageError on an unknown axis,
// empty values or a non-integral value for an integer axis.
std::vector<ExperimentConfig> ExpandSweep(const ExperimentConfig& base,
                                          std::string_view axis,
                                          const std::vector<double>& values);

std::vector<TrialResult> Sweep(const ExperimentConfig& base, std::string_view axis,
                               const std::vector<double>& values, int jobs);

struct Report {
  std::string csv;
  std::string table;
};

// Per-(config, algo) mean and std of every metric. Rows whose ledger total
// differs from the config's reference (sprifed_omp, else the largest private
// total) by more than one step's mu are replaced by a warning row. Throws
// UsageError when the input holds no rows.
Report Summarize(std::string_view jsonl);
Report SummarizeFile(const std::string& path);

}  // namespace sprifed

#endif  // SPRIFED_HARNESS_HPP_
