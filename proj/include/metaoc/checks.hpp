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
#ifndef METAOC_CHECKS_HPP
#define METAOC_CHECKS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace metaoc {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the acceptance battery and prints one PASS/FAIL line per criterion.
/// `quick` trims sample counts and skips the two long experiment trends.
/// `work_dir` receives experiment outputs (suites, CSVs, charts).
bool run_acceptance_checks(std::ostream& out, bool quick,
                           const std::string& work_dir,
                           std::vector<CheckResult>* results = nullptr);

}  // namespace metaoc

#endif  // METAOC_CHECKS_HPP
