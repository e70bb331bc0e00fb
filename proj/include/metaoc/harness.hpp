/*
 Copyright 2026 The metaoc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef METAOC_HARNESS_HPP
#define METAOC_HARNESS_HPP

#include <map>
#include <string>
#include <vector>

#include "metaoc/bench.hpp"

namespace metaoc {

/// Full experiment description. Defaults reproduce the benchmark setup:
/// n = 2, m = 1, T = 25, kappa_A = kappa_B = kappa_w = 1, kappa = sqrt(nm),
/// gamma = 0.5.
struct ExperimentConfig {
  int n = 2;
  int m = 1;
  int N = 30;
  long T = 25;
  std::vector<long> T_sweep;  // non-empty switches to the horizon sweep
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::string> methods = {"non-adaptive", "independent-oc", "moc1",
                                      "moc2"};
  double D_star = 0.5;
  double epsilon = 0.05;
  double zeta = 0.0;  // 0 = (1 + ln T) / ln T
  double kappa_A = 1.0;
  double kappa_B = 1.0;
  double kappa_w = 1.0;
  double kappa = 0.0;  // 0 = sqrt(n m)
  double gamma = 0.5;
  // Step-size scale of the regret-bound constants. The closed-form bounds
  // are far above the gradients the benchmark realizes, so the
  // gradient-constant default is small to keep eta = D / (G_tilde sqrt(T))
  // in the regime where online learning is visible; the raw gradient
  // constant of the benchmark quadratics themselves is 2 * 0.625 = 1.25.
  double G = 2.5e-4;
  double beta = 0.625;
  double S = 10.0;
  double d = 0.0;  // 0 = n
  std::string disturbance = "sinusoidal";
  std::string B_rule = "const-half";
  std::string output_dir = "out";

  SystemBounds bounds() const;
  double effective_kappa() const;
  double effective_d() const;
  void validate() const;
};

/// Parses a key = value document; keys must match ExperimentConfig field
/// names exactly and unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Serialized suite plus everything needed to re-run it bit-exactly.
struct SuiteArtifact {
  std::string json_text;
  std::string hash;  // fnv1a-64 of json_text, hex
};

struct GeneratedSuite {
  std::vector<TaskSpec> tasks;
  SuiteArtifact artifact;
};

/// Draws one suite of N tasks from the given seed: perturbed A matrices,
/// the configured B rule, per-step diagonal quadratic costs, and one
/// disturbance stream seed per task.
GeneratedSuite generate_task_suite(const ExperimentConfig& cfg,
                                   std::uint64_t seed);
/// Horizon override used by the sweep mode.
GeneratedSuite generate_task_suite(const ExperimentConfig& cfg,
                                   std::uint64_t seed, long T);

/// Rebuilds tasks from a stored artifact (the replay path).
std::vector<TaskSpec> tasks_from_artifact(const std::string& json_text,
                                          ExperimentConfig* cfg_out = nullptr);

/// One (method, seed, T) run.
struct ExperimentCell {
  std::string method;
  std::uint64_t seed = 0;
  long T = 0;
  MetaReport report;
  std::string suite_hash;
  bool failed = false;
  std::string error;
};

struct ExperimentReport {
  ExperimentConfig cfg;
  std::vector<ExperimentCell> cells;
  bool partial = false;  // set when any cell failed

  /// Mean over seeds of the running meta-regret curve.
  std::vector<double> mean_meta_regret_curve(const std::string& method,
                                             long T) const;
  /// Per-seed least-squares slopes of the running meta-regret vs N.
  std::vector<double> per_seed_slopes(const std::string& method, long T) const;
  /// Mean over seeds of the final meta-regret.
  double mean_final_meta_regret(const std::string& method, long T) const;
};

/// Runs every enabled method on the same per-seed suites, writes
/// results.csv, summary.json, the chart(s) and one suite artifact per
/// (seed, T) into cfg.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Re-runs an experiment from the artifacts stored in `input_dir` and
/// writes the outputs into `output_dir`. The rewritten results.csv must be
/// byte-identical to the original.
ExperimentReport replay_experiment(const std::string& input_dir,
                                   const std::string& output_dir);

/// Runs a suite of MetaReports through the CSV writer.
void write_results_csv(const std::string& path,
                       const std::vector<ExperimentCell>& cells);
void write_summary_json(const std::string& path, const ExperimentReport& report);
void write_charts(const std::string& dir, const ExperimentReport& report);

std::string fnv1a_hex(const std::string& data);

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace metaoc

#endif  // METAOC_HARNESS_HPP
