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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "metaoc/checks.hpp"
#include "metaoc/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCheckFailed = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int do_run(const std::string& config_path, const std::string& output_override) {
  metaoc::ExperimentConfig cfg = config_path.empty()
                                     ? metaoc::ExperimentConfig{}
                                     : metaoc::load_experiment_config(config_path);
  if (!output_override.empty()) cfg.output_dir = output_override;
  cfg.validate();
  const metaoc::ExperimentReport report = metaoc::run_experiment(cfg);
  std::cout << "wrote " << cfg.output_dir << "/results.csv, summary.json and charts\n";
  for (const metaoc::ExperimentCell& cell : report.cells) {
    if (cell.failed) {
      std::cerr << "cell failed: " << cell.method << " seed " << cell.seed
                << " T " << cell.T << ": " << cell.error << "\n";
    }
  }
  return report.partial ? kExitRuntime : kExitOk;
}

int do_suite(const std::string& config_path, std::uint64_t seed,
             const std::string& out_path) {
  metaoc::ExperimentConfig cfg = config_path.empty()
                                     ? metaoc::ExperimentConfig{}
                                     : metaoc::load_experiment_config(config_path);
  const metaoc::GeneratedSuite suite = metaoc::generate_task_suite(cfg, seed);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw metaoc::ConfigError("suite: cannot write " + out_path);
  out << suite.artifact.json_text;
  std::cout << "suite hash " << suite.artifact.hash << " -> " << out_path << "\n";
  return kExitOk;
}

int do_replay(const std::string& input_dir, std::string output_dir) {
  if (output_dir.empty()) output_dir = input_dir + "_replay";
  metaoc::replay_experiment(input_dir, output_dir);
  const std::string original = input_dir + "/results.csv";
  if (std::filesystem::exists(original)) {
    const std::string a = slurp(original);
    const std::string b = slurp(output_dir + "/results.csv");
    if (a != b) {
      std::cerr << "replay mismatch: " << output_dir
                << "/results.csv differs from " << original << "\n";
      return kExitRuntime;
    }
    std::cout << "replay reproduced results.csv byte-for-byte\n";
  } else {
    std::cout << "replay written to " << output_dir << "\n";
  }
  return kExitOk;
}

int do_check(bool quick, const std::string& work_dir) {
  const bool ok = metaoc::run_acceptance_checks(std::cout, quick, work_dir);
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meta-learning online control benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, output_dir, suite_out = "suite.json";
  std::string replay_in, replay_out, check_dir = "check_out";
  std::uint64_t seed = 0;
  bool quick = false;

  CLI::App* run = app.add_subcommand("run", "run a full experiment");
  run->add_option("-c,--config", config_path, "config file (key = value lines)");
  run->add_option("-o,--output", output_dir, "output directory override");

  CLI::App* suite = app.add_subcommand("suite", "generate and store a task suite");
  suite->add_option("-c,--config", config_path, "config file");
  suite->add_option("-s,--seed", seed, "suite seed");
  suite->add_option("-o,--output", suite_out, "output file");

  CLI::App* replay = app.add_subcommand("replay", "re-run from stored suites");
  replay->add_option("dir", replay_in, "experiment output directory")->required();
  replay->add_option("-o,--output", replay_out, "replay output directory");

  CLI::App* check = app.add_subcommand("check", "run the acceptance battery");
  check->add_flag("--quick", quick, "reduced sample counts, skip slow trends");
  check->add_option("-d,--dir", check_dir, "scratch directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return do_run(config_path, output_dir);
    if (suite->parsed()) return do_suite(config_path, seed, suite_out);
    if (replay->parsed()) return do_replay(replay_in, replay_out);
    if (check->parsed()) return do_check(quick, check_dir);
  } catch (const metaoc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
