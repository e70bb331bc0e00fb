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
#ifndef METAOC_META_HPP
#define METAOC_META_HPP

#include "metaoc/oc.hpp"

namespace metaoc {

struct HindsightOptions {
  int max_iterations = 5000;
  double stationarity_tol = 1e-6;
};

/// Result of the hindsight solve: the best iterate, a stationarity
/// certificate (projected-gradient displacement per unit step), and the
/// objective value sum_t g_t at the returned point.
struct HindsightResult {
  DacParams M_star;
  double objective = 0.0;
  double stationarity = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// argmin over the domain of F(M) = sum_t g_t(M) by projected gradient
/// descent from the zero parameter. Flat objectives return the zero
/// iterate.
HindsightResult hindsight_optimum(const TaskRecord& record,
                                  const SurrogateContext& ctx,
                                  const std::vector<CostFunction>& costs,
                                  const DacDomain& dom,
                                  const HindsightOptions& opts = {});

/// Gradient of the meta loss 0.5 ||M^m - M*||^2, which is M^m - M*.
DacParams meta_loss_grad(const DacParams& M_meta, const DacParams& M_star);

/// Meta-learner state across tasks.
struct MetaState {
  DacParams M_meta;      ///< initialization for the next task
  int i = 1;             ///< 1-based task counter
  DacParams running_sum; ///< sum of hindsight optima seen so far
  double D_i = 0.0;      ///< current diameter guess (doubling schedule)
  int k = 0;             ///< cumulative increment count
  double epsilon = 0.0;
  double zeta = 0.0;
};

/// One outer OGD step with rate 1/i: M^m <- Proj(M^m - (1/i)(M^m - M*_i)).
/// Absent active projections this is the running mean of the optima.
MetaState meta_update(const MetaState& state, const DacParams& M_star,
                      const DacDomain& dom);

/// Cross-task results for one method on one suite.
struct MetaReport {
  std::vector<double> task_regrets;
  double meta_regret = 0.0;      ///< mean of task_regrets
  double D_bar = 0.0;            ///< rms deviation of the M*_i about their mean
  double D_star_max_pairwise = 0.0;
  double D_star_ritter = 0.0;    ///< approximate enclosing-ball diameter
  std::vector<double> D_trace;   ///< diameter guess per task
  std::vector<int> k_trace;      ///< increment count at each task start
  int total_increments = 0;      ///< final increment count (doubling only)
  std::vector<DacParams> M_stars;
  std::vector<DacParams> M_metas;  ///< per-task initialization
  std::vector<double> etas;
  std::vector<double> r_t1;        ///< cost-approximation residuals
  std::vector<double> r_t2;        ///< policy-regret terms
  std::vector<double> policy_regret_bounds;
  std::vector<double> dist_to_meta;  ///< ||M*_i - M^m_i||
  std::vector<bool> hindsight_converged;
  ConstantsBundle consts;
  long T = 0;

  /// Running mean of task regrets after each task (the meta-regret curve).
  std::vector<double> cumulative_meta_regret() const;
};

/// Doubling schedule pieces: the guess is zeta^k epsilon, and k advances
/// when a hindsight optimum lands outside the current guess around the mean
/// (never on the first task).
double diameter_guess(double epsilon, double zeta, int k);
int bump_increment_count(int k, int task_index, double deviation, double D_i);

/// Meta-learning online control with known similarity diameter: fixed inner
/// step from D_star, outer OGD on the meta loss.
MetaReport run_moc1(const std::vector<TaskSpec>& tasks, double D_star,
                    const ConstantsBundle& consts);

/// Diameter-adaptive variant: inner step from the current guess D_i, mean
/// initialization, and geometric guess growth on deviation triggers.
/// zeta <= 0 selects the default (1 + ln T) / ln T.
MetaReport run_moc2(const std::vector<TaskSpec>& tasks, double epsilon,
                    double zeta, const ConstantsBundle& consts);

/// One task end to end: synthesize the gain, roll out, solve hindsight,
/// and account the regret terms. Shared by the meta drivers and baselines.
struct TaskOutcome {
  TaskRecord record;
  HindsightResult hindsight;
  double regret = 0.0;       ///< realized cost minus hindsight surrogate cost
  double r_t1 = 0.0;
  double r_t2 = 0.0;
  double policy_regret_bound = 0.0;  ///< +inf when eta == 0
};
TaskOutcome run_task_with_hindsight(const TaskSpec& task,
                                    const ConstantsBundle& consts, double eta,
                                    const DacParams& M_init);

/// Deviation statistic D_bar: sqrt((1/N) sum ||M_i - mean||^2).
double rms_deviation(const std::vector<DacParams>& points);
double max_pairwise_distance(const std::vector<DacParams>& points);
/// Two-pass approximate smallest-enclosing-ball diameter.
double ritter_diameter(const std::vector<DacParams>& points);

}  // namespace metaoc

#endif  // METAOC_META_HPP
