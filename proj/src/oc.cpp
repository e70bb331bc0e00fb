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
#include "metaoc/oc.hpp"

#include <cmath>
#include <numeric>

namespace metaoc {

namespace {

constexpr double kDivergenceGuard = 1e6;

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

double TaskRecord::total_realized_cost() const { return sum(realized_costs); }
double TaskRecord::total_ideal_cost() const { return sum(ideal_costs); }
double TaskRecord::total_surrogate_cost() const { return sum(surrogate_costs); }

double TaskRecord::cost_approx_residual() const {
  return total_realized_cost() - total_ideal_cost();
}

TaskRecord run_oc(const TaskSpec& task, const OcConfig& cfg) {
  if (task.T < 1 || static_cast<long>(task.costs.size()) != task.T) {
    throw std::invalid_argument("run_oc: task needs one cost per step");
  }
  if (!(cfg.eta >= 0.0) || !std::isfinite(cfg.eta)) {
    throw std::invalid_argument("run_oc: eta must be finite and >= 0");
  }
  if (cfg.H != cfg.dom.H || cfg.H < 1) {
    throw std::invalid_argument("run_oc: H inconsistent with domain");
  }
  if (!cfg.dom.contains(cfg.M_init)) {
    throw std::invalid_argument("run_oc: M_init outside the feasible set");
  }
  const int n = task.sys.n();
  const int m = task.sys.m();
  if (cfg.K.rows() != m || cfg.K.cols() != n || cfg.dom.m != m || cfg.dom.n != n) {
    throw std::invalid_argument("run_oc: gain/domain shape mismatch");
  }

  TaskRecord rec;
  rec.eta = cfg.eta;
  rec.H = cfg.H;
  rec.seed = task.seed;
  rec.states.reserve(task.T + 1);
  rec.inputs.reserve(task.T);
  rec.disturbances.reserve(task.T);
  rec.params.reserve(task.T + 1);

  std::vector<Vector> log;
  log.reserve(task.T);
  SurrogateContext ctx(cfg.K, task.sys, log, cfg.H);
  DisturbanceHistory hist(cfg.H, n);

  Vector x = Vector::Zero(n);
  rec.states.push_back(x);
  rec.params.push_back(cfg.M_init);

  for (long t = 1; t <= task.T; ++t) {
    const DacParams& M_t = rec.params.back();
    const CostFunction& cost = task.costs[static_cast<size_t>(t - 1)];

    const Vector u = control_action(cfg.K, M_t, x, hist);
    const Vector w = emit_disturbance(task.disturbance, t);
    const Vector x_next = step(task.sys, x, u, w);
    const Vector w_rec = recover_disturbance(task.sys, x, u, x_next);
    log.push_back(w_rec);
    hist.push(w_rec);

    rec.inputs.push_back(u);
    rec.disturbances.push_back(w_rec);
    rec.realized_costs.push_back(cost.value(x, u));

    // f_t over the trajectory window; parameters before M_1 clamp to M_1
    // (they only multiply zero-padded disturbances).
    std::vector<DacParams> window;
    window.reserve(static_cast<size_t>(cfg.H) + 1);
    for (long j = t - cfg.H; j <= t; ++j) {
      window.push_back(rec.params[static_cast<size_t>(std::max(1L, j) - 1)]);
    }
    rec.ideal_costs.push_back(ideal_cost_f(ctx, window, cost, t));
    rec.surrogate_costs.push_back(surrogate_cost_g(ctx, M_t, cost, t));

    if (cfg.eta > 0.0) {
      const DacParams grad = surrogate_grad(ctx, M_t, cost, t);
      rec.params.push_back(project(M_t - cfg.eta * grad, cfg.dom));
    } else {
      rec.params.push_back(M_t);
    }

    if (x_next.norm() > kDivergenceGuard) {
      throw DivergenceError("run_oc: state norm exceeded 1e6 at t=" +
                            std::to_string(t));
    }
    x = x_next;
    rec.states.push_back(x);
  }
  return rec;
}

double default_step_size(double D_scale, const ConstantsBundle& consts, long T) {
  if (!(D_scale > 0.0)) {
    throw std::invalid_argument("default_step_size: D_scale must be positive");
  }
  if (T < 2) throw std::invalid_argument("default_step_size: T must be >= 2");
  if (!(consts.G_tilde > 0.0)) {
    throw std::invalid_argument("default_step_size: constants not populated");
  }
  return D_scale / (consts.G_tilde * std::sqrt(static_cast<double>(T)));
}

}  // namespace metaoc
