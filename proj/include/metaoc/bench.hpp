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
#ifndef METAOC_BENCH_HPP
#define METAOC_BENCH_HPP

#include "metaoc/meta.hpp"

namespace metaoc {

/// Comparator for the task regret. The default compares against the best
/// fixed policy parameter in hindsight; the exhaustive linear-feedback grid
/// is only meant for tiny systems.
struct ComparatorChoice {
  enum class Kind { kHindsightDac, kGridLinearFeedback };
  Kind kind = Kind::kHindsightDac;
  double gain_range = 1.0;  ///< grid spans [-gain_range, gain_range] per entry
  int points_per_dim = 0;   ///< 0 = pick from the gain dimension
};

/// Rollout with u = -K x and no parameter learning. Record-identical to
/// run_oc with eta = 0 and a zero initialization.
TaskRecord run_non_adaptive(const TaskSpec& task, const Matrix& K,
                            const ConstantsBundle& consts);

/// Baseline suites, reported in the same shape as the meta algorithms.
MetaReport run_non_adaptive_suite(const std::vector<TaskSpec>& tasks,
                                  const ConstantsBundle& consts);
/// Fresh zero initialization and the full-diameter step size on every task.
MetaReport run_independent_oc(const std::vector<TaskSpec>& tasks,
                              const ConstantsBundle& consts);

/// Realized cost minus the comparator's cost. The hindsight comparator uses
/// the record's M* (computed on demand if absent).
double task_regret(const TaskRecord& record, const ComparatorChoice& comparator,
                   const SurrogateContext& ctx,
                   const std::vector<CostFunction>& costs, const DacDomain& dom);

/// Mean of the per-task regrets.
double meta_regret(const std::vector<double>& regrets);

}  // namespace metaoc

#endif  // METAOC_BENCH_HPP
