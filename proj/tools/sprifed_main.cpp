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

// sprifed: command-line front end.
//
//   sprifed gen-data --out d.csv --n 200 --p 50 --s 5 [--seed 1]
//   sprifed run --config exp.toml [--jobs N] [--out results.jsonl]
//   sprifed sweep --config exp.toml --axis n --values 400,800 [--jobs N]
//   sprifed report results.jsonl [--out summary.csv]
//
// Exit status: 0 on success, 2 on usage errors, 1 otherwise.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sprifed/sprifed.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int Report(sprifed_status status) {
  if (status == SPRIFED_OK) return 0;
  std::fprintf(stderr, "sprifed: %s\n", sprifed_last_error());
  return status == SPRIFED_ERR_USAGE ? kExitUsage : kExitFailure;
}

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private sparse regression in simulated federations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sprifed_version()));

  sprifed_synthetic_params gen;
  sprifed_synthetic_params_init(&gen);
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic sparse dataset as CSV");
  gen_cmd->add_option("--out", gen_out, "Output CSV path")->required();
  gen_cmd->add_option("--n", gen.n, "Number of clients (rows)")->required();
  gen_cmd->add_option("--p", gen.p, "Number of features")->required();
  gen_cmd->add_option("--s", gen.s, "Support size")->required();
  gen_cmd->add_option("--sigma-eps", gen.sigma_eps, "Label noise stddev")
      ->capture_default_str();
  gen_cmd->add_option("--coef-mean", gen.coef_mean, "Mean of nonzero coefficients")
      ->capture_default_str();
  gen_cmd->add_option("--coef-std", gen.coef_std, "Stddev of nonzero coefficients")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--x-clip", gen.x_clip, "Feature clip before rescaling")
      ->capture_default_str();
  gen_cmd->add_option("--y-clip", gen.y_clip, "Response clip before rescaling")
      ->capture_default_str();

  std::string config_path;
  std::string output;
  int jobs = 1;
  auto* run_cmd = app.add_subcommand("run", "Run a TOML experiment");
  run_cmd->add_option("--config", config_path, "Experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", output, "Override the JSON-lines output path");

  std::string axis;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an experiment over one axis");
  sweep_cmd->add_option("--config", config_path, "Base experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--axis", axis, "n, p, s, sigma_eps, mu_p, mu_s, epsilon "
                                        "or clip_bound")
      ->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Parallel trials")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", output, "Override the JSON-lines output path");

  std::string results_path;
  std::string csv_out;
  auto* report_cmd = app.add_subcommand("report", "Summarize JSON-lines results");
  report_cmd->add_option("results", results_path, "JSON-lines results file")
      ->required();
  report_cmd->add_option("--out", csv_out, "Write the CSV summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*gen_cmd) {
    sprifed_dataset* ds = nullptr;
    if (int rc = Report(sprifed_dataset_generate(&gen, &ds))) return rc;
    const int rc = Report(sprifed_dataset_write_csv(ds, gen_out.c_str()));
    sprifed_dataset_free(ds);
    return rc;
  }
  if (*run_cmd) {
    return Report(sprifed_experiment_run(config_path.c_str(), jobs, OrNull(output)));
  }
  if (*sweep_cmd) {
    return Report(sprifed_experiment_sweep(config_path.c_str(), axis.c_str(),
                                           values.data(), values.size(), jobs,
                                           OrNull(output)));
  }
  if (*report_cmd) {
    char* table = nullptr;
    const int rc = Report(
        sprifed_experiment_report(results_path.c_str(), OrNull(csv_out), &table));
    if (table != nullptr) {
      std::fputs(table, stdout);
      sprifed_string_free(table);
    }
    return rc;
  }
  return kExitUsage;
}
