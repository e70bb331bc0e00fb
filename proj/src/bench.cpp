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
#include "metaoc/bench.hpp"

#include <cmath>
#include <limits>

namespace metaoc {

TaskRecord run_non_adaptive(const TaskSpec& task, const Matrix& K,
                            const ConstantsBundle& consts) {
  OcConfig cfg;
  cfg.eta = 0.0;
  cfg.H = consts.H;
  cfg.dom = DacDomain::make(consts.bounds, consts.H, task.sys.m(), task.sys.n());
  cfg.M_init = DacParams::zero(consts.H, task.sys.m(), task.sys.n());
  cfg.K = K;
  return run_oc(task, cfg);
}

namespace {

MetaReport run_baseline_suite(const std::vector<TaskSpec>& tasks,
                              const ConstantsBundle& consts, double eta,
                              double D_report) {
  if (tasks.empty()) throw std::invalid_argument("baseline suite: no tasks");
  MetaReport report;
  report.consts = consts;
  report.T = tasks[0].T;
  const DacParams M0 =
      DacParams::zero(consts.H, tasks[0].sys.m(), tasks[0].sys.n());
  for (size_t i = 0; i < tasks.size(); ++i) {
    TaskOutcome outcome;
    try {
      outcome = run_task_with_hindsight(tasks[i], consts, eta, M0);
    } catch (const SynthesisError& e) {
      throw SynthesisError("baseline suite: task " + std::to_string(i + 1) +
                           ": " + e.what());
    }
    report.task_regrets.push_back(outcome.regret);
    report.M_stars.push_back(outcome.hindsight.M_star);
    report.M_metas.push_back(M0);
    report.etas.push_back(eta);
    report.r_t1.push_back(outcome.r_t1);
    report.r_t2.push_back(outcome.r_t2);
    report.policy_regret_bounds.push_back(outcome.policy_regret_bound);
    report.dist_to_meta.push_back((outcome.hindsight.M_star - M0).norm());
    report.hindsight_converged.push_back(outcome.hindsight.converged);
    report.D_trace.push_back(D_report);
  }
  double acc = 0.0;
  for (double r : report.task_regrets) acc += r;
  report.meta_regret = acc / static_cast<double>(report.task_regrets.size());
  report.D_bar = rms_deviation(report.M_stars);
  report.D_star_max_pairwise = max_pairwise_distance(report.M_stars);
  report.D_star_ritter = ritter_diameter(report.M_stars);
  return report;
}

double grid_comparator_cost(const TaskRecord& record,
                            const ComparatorChoice& comparator,
                            const SurrogateContext& ctx,
                            const std::vector<CostFunction>& costs) {
  const SystemMatrices& sys = ctx.sys();
  const int m = sys.m();
  const int n = sys.n();
  const int dims = m * n;
  if (dims > 4) {
    throw ConfigError("task_regret: grid comparator needs m*n <= 4");
  }
  int points = comparator.points_per_dim;
  if (points <= 0) points = (dims <= 2) ? 101 : 21;
  const double range = comparator.gain_range;

  const long T = static_cast<long>(costs.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<size_t>(dims), 0);
  while (true) {
    Matrix K(m, n);
    for (int j = 0; j < dims; ++j) {
      const double frac =
          (points == 1) ? 0.5 : static_cast<double>(idx[static_cast<size_t>(j)]) /
                                    (points - 1);
      K(j % m, j / m) = -range + 2.0 * range * frac;
    }
    double cost_sum = 0.0;
    Vector x = Vector::Zero(n);
    bool diverged = false;
    for (long t = 1; t <= T; ++t) {
      const Vector u = -K * x;
      cost_sum += costs[static_cast<size_t>(t - 1)].value(x, u);
      x = sys.A() * x + sys.B() * u +
          record.disturbances[static_cast<size_t>(t - 1)];
      if (x.norm() > 1e9) {
        diverged = true;
        break;
      }
    }
    if (!diverged) best = std::min(best, cost_sum);

    int j = 0;
    for (; j < dims; ++j) {
      if (++idx[static_cast<size_t>(j)] < points) break;
      idx[static_cast<size_t>(j)] = 0;
    }
    if (j == dims) break;
  }
  return best;
}

}  // namespace

MetaReport run_non_adaptive_suite(const std::vector<TaskSpec>& tasks,
                                  const ConstantsBundle& consts) {
  return run_baseline_suite(tasks, consts, 0.0, 0.0);
}

MetaReport run_independent_oc(const std::vector<TaskSpec>& tasks,
                              const ConstantsBundle& consts) {
  if (tasks.empty()) throw std::invalid_argument("run_independent_oc: no tasks");
  const double eta = default_step_size(consts.D_domain, consts, tasks[0].T);
  return run_baseline_suite(tasks, consts, eta, consts.D_domain);
}

double task_regret(const TaskRecord& record, const ComparatorChoice& comparator,
                   const SurrogateContext& ctx,
                   const std::vector<CostFunction>& costs, const DacDomain& dom) {
  if (record.realized_costs.size() != costs.size()) {
    throw std::invalid_argument("task_regret: record incomplete");
  }
  if (comparator.kind == ComparatorChoice::Kind::kGridLinearFeedback) {
    return record.total_realized_cost() -
           grid_comparator_cost(record, comparator, ctx, costs);
  }
  DacParams M_star;
  if (record.hindsight.has_value()) {
    M_star = *record.hindsight;
  } else {
    M_star = hindsight_optimum(record, ctx, costs, dom).M_star;
  }
  double comparator_cost = 0.0;
  for (long t = 1; t <= static_cast<long>(costs.size()); ++t) {
    comparator_cost +=
        surrogate_cost_g(ctx, M_star, costs[static_cast<size_t>(t - 1)], t);
  }
  return record.total_realized_cost() - comparator_cost;
}

double meta_regret(const std::vector<double>& regrets) {
  if (regrets.empty()) throw std::invalid_argument("meta_regret: empty list");
  double acc = 0.0;
  for (double r : regrets) acc += r;
  return acc / static_cast<double>(regrets.size());
}

}  // namespace metaoc
