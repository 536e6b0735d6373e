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

#include "sprifed/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include "sprifed/error.hpp"
#include "sprifed/rng.hpp"

namespace sprifed {
namespace {

constexpr double kDefaultMuS = 0.02;
constexpr double kDefaultSgdLearningRate = 16.0;
constexpr double kDefaultSgdL1 = 1e-3;
constexpr double kDefaultBaselineClip = 1.0;

constexpr uint64_t kTagTrial = Tag("harness/trial");
constexpr uint64_t kTagTest = Tag("harness/test");
constexpr uint64_t kTagAlgo = Tag("harness/algo");

constexpr std::string_view kAlgorithms[] = {
    "omp",       "sprifed_omp", "sprifed_omp_no_enhancement", "sprifed_omp_grad",
    "dp_sgd_l1", "dp_gcd"};

const std::set<std::string_view> kTopLevelKeys = {
    "n",      "p",          "s",          "sigma_eps", "coef_mean",      "coef_std",
    "x_clip", "y_clip",     "n_test",     "csv_path",  "algos",          "mu_p",
    "mu_s",   "epsilon",    "delta",      "clip_bound", "mask_fidelity", "trials",
    "master_seed", "output", "record_runtime", "baseline"};

const std::set<std::string_view> kBaselineKeys = {
    "algo", "learning_rate", "l1_coef", "clip_bound", "mu_step", "total_steps"};

std::string Where(const toml::node& node) {
  const auto& src = node.source();
  return "line " + std::to_string(src.begin.line);
}

double GetDouble(const toml::node& node, std::string_view key) {
  if (auto v = node.value<double>()) return *v;
  throw UsageError("config key \"" + std::string(key) + "\" must be a number (" +
                   Where(node) + ")");
}

int64_t GetInt(const toml::node& node, std::string_view key) {
  if (node.is_integer()) return *node.value<int64_t>();
  throw UsageError("config key \"" + std::string(key) + "\" must be an integer (" +
                   Where(node) + ")");
}

std::string GetString(const toml::node& node, std::string_view key) {
  if (node.is_string()) return *node.value<std::string>();
  throw UsageError("config key \"" + std::string(key) + "\" must be a string (" +
                   Where(node) + ")");
}

bool GetBool(const toml::node& node, std::string_view key) {
  if (node.is_boolean()) return *node.value<bool>();
  throw UsageError("config key \"" + std::string(key) + "\" must be a boolean (" +
                   Where(node) + ")");
}

BaselineSettings ParseBaseline(const toml::table& tbl) {
  BaselineSettings b;
  for (const auto& [k, node] : tbl) {
    const std::string_view key = k.str();
    if (!kBaselineKeys.count(key)) {
      throw UsageError("unknown key \"" + std::string(key) + "\" in [[baseline]] (" +
                       Where(node) + ")");
    }
    if (key == "algo") b.algo = GetString(node, key);
    if (key == "learning_rate") b.learning_rate = GetDouble(node, key);
    if (key == "l1_coef") b.l1_coef = GetDouble(node, key);
    if (key == "clip_bound") b.clip_bound = GetDouble(node, key);
    if (key == "mu_step") b.mu_step = GetDouble(node, key);
    if (key == "total_steps") b.total_steps = GetInt(node, key);
  }
  if (b.algo != "dp_sgd_l1" && b.algo != "dp_gcd") {
    throw UsageError("[[baseline]] algo must be dp_sgd_l1 or dp_gcd");
  }
  return b;
}

const BaselineSettings* FindBaseline(const ExperimentConfig& config,
                                     std::string_view algo) {
  for (const auto& b : config.baselines) {
    if (b.algo == algo) return &b;
  }
  return nullptr;
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

nlohmann::json ConfigJson(const ExperimentConfig& c) {
  nlohmann::json j;
  j["n"] = c.n;
  j["p"] = c.p;
  j["s"] = c.s;
  j["sigma_eps"] = c.sigma_eps;
  j["mu_p"] = OptionalJson(c.mu_p);
  j["mu_s"] = OptionalJson(c.mu_s);
  j["epsilon"] = OptionalJson(c.epsilon);
  j["delta"] = OptionalJson(c.delta);
  j["clip_bound"] = c.clip_bound;
  j["trials"] = c.trials;
  if (c.csv_path) j["csv_path"] = *c.csv_path;
  return j;
}

double MaxEventMu(const PrivacyLedger& ledger) {
  double m = 0.0;
  for (const auto& e : ledger.events()) m = std::max(m, e.mu);
  return m;
}

bool SameSet(std::vector<Index> a, std::vector<Index> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::vector<TrialResult> RunOneTrial(const ExperimentConfig& config,
                                     int64_t config_index, int64_t trial) {
  const uint64_t seed = TrialSeed(config.master_seed, trial);
  std::vector<TrialResult> rows;
  auto base_row = [&](const std::string& algo) {
    TrialResult r;
    r.algo = algo;
    r.config_index = config_index;
    r.trial = trial;
    r.seed = seed;
    r.test_mse = std::numeric_limits<double>::quiet_NaN();
    return r;
  };

  Dataset train;
  Dataset test;
  try {
    if (config.csv_path) {
      train = LoadCsv(*config.csv_path, {config.x_clip, config.y_clip, true});
      train.seed = seed;
    } else {
      SyntheticParams sp;
      sp.n = config.n;
      sp.p = config.p;
      sp.s = config.s;
      sp.sigma_eps = config.sigma_eps;
      sp.coef_mean = config.coef_mean;
      sp.coef_std = config.coef_std;
      sp.seed = seed;
      sp.x_clip = config.x_clip;
      sp.y_clip = config.y_clip;
      train = GenerateSynthetic(sp);
      test = GenerateTestSet(train, config.n_test, DeriveKey(seed, kTagTest));
    }
  } catch (const Error& e) {
    for (const auto& algo : config.algos) {
      TrialResult r = base_row(algo);
      r.flags.push_back(std::string("dataset error: ") + e.what());
      rows.push_back(std::move(r));
    }
    return rows;
  }
  const Dataset& eval = config.csv_path ? train : test;

  for (const auto& algo : config.algos) {
    TrialResult r = base_row(algo);
    const auto start = std::chrono::steady_clock::now();
    try {
      const ModelEstimate est =
          RunAlgorithm(algo, config, train, DeriveKey(seed, kTagAlgo, Tag(algo)));
      const auto stop = std::chrono::steady_clock::now();
      if (config.record_runtime) {
        r.runtime_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
      }
      r.flags = est.flags;
      if (config.csv_path) r.flags.push_back("train_mse");
      r.test_mse = TestMse(est, eval);
      if (train.has_ground_truth()) {
        r.correct_basis_count = SupportRecovery(est.support, train.support);
        r.exact_support = SameSet(est.support, train.support);
        r.delta_alpha = EstimationError(est, train);
        r.delta_risk = EmpiricalRisk(est, train);
      }
      r.mu = est.ledger.Total().mu;
      r.step_mu = MaxEventMu(est.ledger);
      if (config.epsilon) {
        r.epsilon = *config.epsilon;
        r.delta = GdpToDp(r.mu, *config.epsilon).delta;
        if (config.delta && *r.delta > *config.delta * (1.0 + 1e-9)) {
          r.flags.push_back("over_budget");
        }
      }
    } catch (const Error& e) {
      r.flags.push_back(std::string("error: ") + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

struct Stat {
  double mean = 0.0;
  double std = 0.0;
  int64_t count = 0;
};

Stat Summary(const std::vector<double>& v) {
  Stat s;
  s.count = static_cast<int64_t>(v.size());
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

void AppendNumbers(const nlohmann::json& j, const char* key, std::vector<double>& out) {
  if (j.contains(key) && j[key].is_number()) out.push_back(j[key].get<double>());
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (algos.empty()) throw UsageError("algos must list at least one algorithm");
  for (const auto& a : algos) {
    if (!IsKnownAlgorithm(a)) throw UsageError("unknown algorithm \"" + a + "\"");
  }
  if (s < 1) throw UsageError("s must be >= 1");
  if (csv_path) {
    if (n != 0 || p != 0) throw UsageError("give either csv_path or n/p, not both");
  } else {
    if (n < 1 || p < 1) throw UsageError("n and p must be >= 1");
    if (s > p) throw UsageError("s must be <= p");
    if (n_test < 1) throw UsageError("n_test must be >= 1");
    if (!(sigma_eps >= 0.0)) throw UsageError("sigma_eps must be >= 0");
  }
  if (!(x_clip > 0.0) || !(y_clip > 0.0)) throw UsageError("clips must be > 0");
  if (!(clip_bound > 0.0)) throw UsageError("clip_bound must be > 0");
  if (mu_p && !(*mu_p > 0.0)) throw UsageError("mu_p must be > 0");
  if (mu_s && !(*mu_s > 0.0)) throw UsageError("mu_s must be > 0");
  if (epsilon.has_value() != delta.has_value()) {
    throw UsageError("epsilon and delta must be given together");
  }
  if (epsilon && (!(*epsilon >= 0.0) || !(*delta > 0.0 && *delta < 1.0))) {
    throw UsageError("need epsilon >= 0 and 0 < delta < 1");
  }
  bool needs_privacy = false;
  for (const auto& a : algos) needs_privacy |= a != "omp";
  if (needs_privacy && !mu_p && !epsilon) {
    throw UsageError("private algorithms need mu_p or (epsilon, delta)");
  }
  for (const auto& b : baselines) {
    if (b.learning_rate && !(*b.learning_rate > 0.0)) {
      throw UsageError("baseline learning_rate must be > 0");
    }
    if (b.total_steps && *b.total_steps < 1) {
      throw UsageError("baseline total_steps must be >= 1");
    }
  }
}

ExperimentConfig ParseExperimentConfig(std::string_view toml_text) {
  toml::table tbl;
  try {
    tbl = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error at line " << e.source().begin.line << ": "
        << e.description();
    throw UsageError(msg.str());
  }

  ExperimentConfig c;
  for (const auto& [k, node] : tbl) {
    const std::string_view key = k.str();
    if (!kTopLevelKeys.count(key)) {
      throw UsageError("unknown config key \"" + std::string(key) + "\" (" +
                       Where(node) + ")");
    }
    if (key == "n") c.n = GetInt(node, key);
    if (key == "p") c.p = GetInt(node, key);
    if (key == "s") c.s = GetInt(node, key);
    if (key == "sigma_eps") c.sigma_eps = GetDouble(node, key);
    if (key == "coef_mean") c.coef_mean = GetDouble(node, key);
    if (key == "coef_std") c.coef_std = GetDouble(node, key);
    if (key == "x_clip") c.x_clip = GetDouble(node, key);
    if (key == "y_clip") c.y_clip = GetDouble(node, key);
    if (key == "n_test") c.n_test = GetInt(node, key);
    if (key == "csv_path") c.csv_path = GetString(node, key);
    if (key == "mu_p") c.mu_p = GetDouble(node, key);
    if (key == "mu_s") c.mu_s = GetDouble(node, key);
    if (key == "epsilon") c.epsilon = GetDouble(node, key);
    if (key == "delta") c.delta = GetDouble(node, key);
    if (key == "clip_bound") c.clip_bound = GetDouble(node, key);
    if (key == "mask_fidelity") c.mask_fidelity = GetBool(node, key);
    if (key == "trials") c.trials = GetInt(node, key);
    if (key == "master_seed") {
      const int64_t v = GetInt(node, key);
      if (v < 0) throw UsageError("master_seed must be >= 0");
      c.master_seed = static_cast<uint64_t>(v);
    }
    if (key == "output") c.output = GetString(node, key);
    if (key == "record_runtime") c.record_runtime = GetBool(node, key);
    if (key == "algos") {
      const toml::array* arr = node.as_array();
      if (!arr) throw UsageError("algos must be an array of strings");
      for (const auto& item : *arr) c.algos.push_back(GetString(item, key));
    }
    if (key == "baseline") {
      const toml::array* arr = node.as_array();
      if (!arr || !arr->is_array_of_tables()) {
        throw UsageError("baseline must be written as [[baseline]] tables");
      }
      for (const auto& item : *arr) c.baselines.push_back(ParseBaseline(*item.as_table()));
    }
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str());
}

void ApplySeedOverride(ExperimentConfig& config, const char* env_value) {
  if (env_value == nullptr) return;
  const std::string s(env_value);
  uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("SPRIFED_SEED must be a non-negative integer");
  }
  config.master_seed = v;
}

bool IsKnownAlgorithm(std::string_view algo) {
  return std::find(std::begin(kAlgorithms), std::end(kAlgorithms), algo) !=
         std::end(kAlgorithms);
}

PrivacyParams ResolvePrivacy(const ExperimentConfig& config, std::string_view algo) {
  const double mu_s = config.mu_s.value_or(kDefaultMuS);
  if (config.mu_p) return PrivacyParams(*config.mu_p, mu_s);
  if (!config.epsilon || !config.delta) {
    throw ParameterError("need mu_p or an (epsilon, delta) budget");
  }
  const double budget = MuForBudget(*config.epsilon, *config.delta);
  const double s = static_cast<double>(config.s);
  double mu_p = 0.0;
  if (algo == "sprifed_omp_no_enhancement") {
    // s + 1 covariance-level releases, no Private-OLS.
    mu_p = budget / std::sqrt(s + 1.0);
  } else {
    // s + 1 covariance-level releases (s gradients for the GRAD variant) plus
    // 2s Private-OLS releases at mu_s.
    const double uses = algo == "sprifed_omp_grad" ? s : s + 1.0;
    const double rest = budget * budget - 2.0 * s * mu_s * mu_s;
    if (!(rest > 0.0)) {
      throw ParameterError("mu_s alone exhausts the (epsilon, delta) budget");
    }
    mu_p = std::sqrt(rest / uses);
  }
  return PrivacyParams(mu_p, mu_s);
}

double ReferenceBudgetMu(const ExperimentConfig& config) {
  const PrivacyParams pp = ResolvePrivacy(config, "sprifed_omp");
  const double s = static_cast<double>(config.s);
  return std::sqrt((s + 1.0) * pp.mu_p() * pp.mu_p() +
                   2.0 * s * pp.mu_s() * pp.mu_s());
}

ModelEstimate RunAlgorithm(std::string_view algo, const ExperimentConfig& config,
                           const Dataset& dataset, uint64_t seed) {
  RecoveryOptions opts;
  opts.smpc.mask_fidelity = config.mask_fidelity;
  const Index s = config.s;
  if (algo == "omp") return Omp(dataset, s);
  if (algo == "sprifed_omp") {
    return SprifedOmp(dataset, s, ResolvePrivacy(config, algo), seed, opts);
  }
  if (algo == "sprifed_omp_no_enhancement") {
    return SprifedOmpNoEnhancement(dataset, s, ResolvePrivacy(config, algo), seed,
                                   opts);
  }
  if (algo == "sprifed_omp_grad") {
    return SprifedOmpGrad(dataset, s, ResolvePrivacy(config, algo), config.clip_bound,
                          seed, opts);
  }

  const BaselineSettings none;
  const BaselineSettings* found = FindBaseline(config, algo);
  const BaselineSettings& b = found ? *found : none;
  const double budget = ReferenceBudgetMu(config);
  const double mu_p = ResolvePrivacy(config, "sprifed_omp").mu_p();
  if (algo == "dp_sgd_l1") {
    SgdConfig sgd;
    sgd.learning_rate = b.learning_rate.value_or(kDefaultSgdLearningRate);
    sgd.l1_coef = b.l1_coef.value_or(kDefaultSgdL1);
    sgd.mu_step = b.mu_step.value_or(mu_p);
    sgd.clip_bound = b.clip_bound.value_or(kDefaultBaselineClip);
    sgd.max_budget_mu = budget;
    sgd.seed = seed;
    return DpSgdL1(dataset, s, sgd);
  }
  if (algo == "dp_gcd") {
    GcdConfig gcd;
    gcd.mu_p = b.mu_step.value_or(mu_p);
    gcd.learning_rate =
        b.learning_rate.value_or(1.0 / static_cast<double>(dataset.n()));
    gcd.clip_bound = b.clip_bound.value_or(kDefaultBaselineClip);
    // Two mu_p events per round.
    const double rounds =
        std::isinf(gcd.mu_p) ? 1.0
                             : std::floor(budget * budget / (2.0 * gcd.mu_p * gcd.mu_p));
    gcd.total_steps = b.total_steps.value_or(
        std::max<int64_t>(1, static_cast<int64_t>(std::min(rounds, 1e6))));
    gcd.seed = seed;
    return DpGcd(dataset, s, gcd);
  }
  throw ParameterError("unknown algorithm \"" + std::string(algo) + "\"");
}

uint64_t TrialSeed(uint64_t master_seed, int64_t trial) {
  return DeriveKey(master_seed, kTagTrial, static_cast<uint64_t>(trial));
}

std::vector<TrialResult> RunTrials(const std::vector<ExperimentConfig>& configs,
                                   int jobs) {
  std::vector<std::pair<int64_t, int64_t>> tasks;
  for (size_t c = 0; c < configs.size(); ++c) {
    configs[c].Validate();
    for (int64_t t = 0; t < configs[c].trials; ++t) {
      tasks.emplace_back(static_cast<int64_t>(c), t);
    }
  }
  std::vector<std::vector<TrialResult>> slots(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      const auto [c, t] = tasks[i];
      slots[i] = RunOneTrial(configs[c], c, t);
    }
  };
  const int n_threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<TrialResult> out;
  for (auto& slot : slots) {
    for (auto& r : slot) out.push_back(std::move(r));
  }
  return out;
}

std::string ToJsonLines(const std::vector<ExperimentConfig>& configs,
                        const std::vector<TrialResult>& results) {
  std::string out;
  for (const auto& r : results) {
    nlohmann::json j = r.ToJson();
    j["config"] = ConfigJson(configs.at(r.config_index));
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write \"" + path + "\"");
  out << text;
  if (!out) throw IoError("write failed for \"" + path + "\"");
}

}  // namespace

std::vector<TrialResult> Run(const ExperimentConfig& config, int jobs) {
  const std::vector<ExperimentConfig> configs{config};
  auto results = RunTrials(configs, jobs);
  WriteFile(config.output, ToJsonLines(configs, results));
  return results;
}

std::vector<ExperimentConfig> ExpandSweep(const ExperimentConfig& base,
                                          std::string_view axis,
                                          const std::vector<double>& values) {
  static const std::set<std::string_view> kAxes = {
      "n", "p", "s", "sigma_eps", "mu_p", "mu_s", "epsilon", "clip_bound"};
  if (!kAxes.count(axis)) {
    throw UsageError("unknown sweep axis \"" + std::string(axis) + "\"");
  }
  if (values.empty()) throw UsageError("sweep needs at least one value");
  std::vector<ExperimentConfig> out;
  for (double v : values) {
    ExperimentConfig c = base;
    const bool integral = axis == "n" || axis == "p" || axis == "s";
    if (integral && (v != std::floor(v) || !(v >= 1.0))) {
      throw UsageError("axis " + std::string(axis) + " needs positive integers");
    }
    if (axis == "n") c.n = static_cast<Index>(v);
    if (axis == "p") c.p = static_cast<Index>(v);
    if (axis == "s") c.s = static_cast<Index>(v);
    if (axis == "sigma_eps") c.sigma_eps = v;
    if (axis == "mu_p") c.mu_p = v;
    if (axis == "mu_s") c.mu_s = v;
    if (axis == "epsilon") c.epsilon = v;
    if (axis == "clip_bound") c.clip_bound = v;
    c.Validate();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TrialResult> Sweep(const ExperimentConfig& base, std::string_view axis,
                               const std::vector<double>& values, int jobs) {
  const auto configs = ExpandSweep(base, axis, values);
  auto results = RunTrials(configs, jobs);
  WriteFile(base.output, ToJsonLines(configs, results));
  return results;
}

Report Summarize(std::string_view jsonl) {
  struct Group {
    int64_t config_index = 0;
    std::string algo;
    nlohmann::json config;
    std::vector<double> basis, mse, dalpha, drisk, mu, step_mu, delta;
    std::optional<double> epsilon;
    int64_t rows = 0;
  };
  std::vector<Group> groups;
  std::map<std::pair<int64_t, std::string>, size_t> index;

  std::istringstream in{std::string(jsonl)};
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!j.contains("algo") || !j["algo"].is_string()) {
      throw ParseError("result row without \"algo\"", line_no);
    }
    const int64_t ci = j.value("config_index", int64_t{0});
    const std::string algo = j["algo"].get<std::string>();
    auto key = std::make_pair(ci, algo);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      Group fresh;
      fresh.config_index = ci;
      fresh.algo = algo;
      fresh.config = j.value("config", nlohmann::json::object());
      groups.push_back(std::move(fresh));
    }
    Group& g = groups[it->second];
    ++g.rows;
    AppendNumbers(j, "correct_basis_count", g.basis);
    AppendNumbers(j, "test_mse", g.mse);
    AppendNumbers(j, "delta_alpha", g.dalpha);
    AppendNumbers(j, "delta_risk", g.drisk);
    if (j.contains("privacy")) {
      const auto& pj = j["privacy"];
      AppendNumbers(pj, "mu", g.mu);
      AppendNumbers(pj, "step_mu", g.step_mu);
      AppendNumbers(pj, "delta", g.delta);
      if (pj.contains("epsilon") && pj["epsilon"].is_number()) {
        g.epsilon = pj["epsilon"].get<double>();
      }
    }
  }
  if (groups.empty()) throw UsageError("report: no result rows");

  // Reference ledger total per config.
  std::map<int64_t, double> reference;
  std::set<int64_t> pinned;
  for (const auto& g : groups) {
    const double m = Summary(g.mu).mean;
    if (g.algo == "sprifed_omp") {
      reference[g.config_index] = m;
      pinned.insert(g.config_index);
    } else if (!pinned.count(g.config_index)) {
      reference[g.config_index] = std::max(reference[g.config_index], m);
    }
  }

  const char* kHeader =
      "config_index,algo,n,p,s,trials,correct_basis_mean,correct_basis_std,"
      "test_mse_mean,test_mse_std,delta_alpha_mean,delta_alpha_std,"
      "delta_risk_mean,delta_risk_std,mu,epsilon,delta,warning\n";
  std::string csv = kHeader;
  std::ostringstream table;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-6s %-28s %6s %7s %4s %6s %15s %17s %9s %s\n",
                "config", "algo", "n", "p", "s", "trials", "recovered", "test_mse",
                "mu", "note");
  table << buf;

  auto cell = [](const Stat& s, bool want_std) -> std::string {
    if (s.count == 0) return "";
    return FormatNumber(want_std ? s.std : s.mean);
  };
  for (const auto& g : groups) {
    const Stat basis = Summary(g.basis), mse = Summary(g.mse),
               dalpha = Summary(g.dalpha), drisk = Summary(g.drisk),
               mu = Summary(g.mu), step = Summary(g.step_mu), delta = Summary(g.delta);
    std::string warning;
    const double ref = reference[g.config_index];
    if (mu.count > 0 && mu.mean > 0.0 && step.count > 0 &&
        std::abs(mu.mean - ref) > step.mean + 1e-9) {
      warning = "budget mismatch: mu " + FormatNumber(mu.mean) + " vs reference " +
                FormatNumber(ref);
    }
    const auto cfg_int = [&](const char* k) {
      return g.config.contains(k) && g.config[k].is_number_integer()
                 ? std::to_string(g.config[k].get<int64_t>())
                 : std::string();
    };
    csv += std::to_string(g.config_index) + "," + g.algo + "," + cfg_int("n") + "," +
           cfg_int("p") + "," + cfg_int("s") + "," + std::to_string(g.rows) + ",";
    if (warning.empty()) {
      csv += cell(basis, false) + "," + cell(basis, true) + "," + cell(mse, false) +
             "," + cell(mse, true) + "," + cell(dalpha, false) + "," +
             cell(dalpha, true) + "," + cell(drisk, false) + "," + cell(drisk, true) +
             "," + cell(mu, false) + "," +
             (g.epsilon ? FormatNumber(*g.epsilon) : std::string()) + "," +
             cell(delta, false) + ",\n";
      const std::string rec =
          basis.count ? FormatNumber(basis.mean) + " +- " + FormatNumber(basis.std)
                      : "-";
      const std::string m =
          mse.count ? FormatNumber(mse.mean) + " +- " + FormatNumber(mse.std) : "-";
      std::snprintf(buf, sizeof(buf), "%-6lld %-28s %6s %7s %4s %6lld %15s %17s %9s\n",
                    static_cast<long long>(g.config_index), g.algo.c_str(),
                    cfg_int("n").c_str(), cfg_int("p").c_str(), cfg_int("s").c_str(),
                    static_cast<long long>(g.rows), rec.c_str(), m.c_str(),
                    cell(mu, false).c_str());
    } else {
      csv += ",,,,,,,,," + (g.epsilon ? FormatNumber(*g.epsilon) : std::string()) +
             ",," + warning + "\n";
      std::snprintf(buf, sizeof(buf), "%-6lld %-28s %6s %7s %4s %6lld %15s %17s %9s %s\n",
                    static_cast<long long>(g.config_index), g.algo.c_str(),
                    cfg_int("n").c_str(), cfg_int("p").c_str(), cfg_int("s").c_str(),
                    static_cast<long long>(g.rows), "-", "-", cell(mu, false).c_str(),
                    warning.c_str());
    }
    table << buf;
  }
  return {csv, table.str()};
}

Report SummarizeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return Summarize(text.str());
}

}  // namespace sprifed
