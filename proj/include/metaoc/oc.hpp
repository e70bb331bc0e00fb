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
#ifndef METAOC_OC_HPP
#define METAOC_OC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "metaoc/constants.hpp"
#include "metaoc/surrogate.hpp"

namespace metaoc {

/// One control task: the system, the horizon, the cost sequence and the
/// disturbance stream.
struct TaskSpec {
  SystemMatrices sys;
  long T = 0;
  std::vector<CostFunction> costs;  // costs[t-1] is c_t
  DisturbanceSource disturbance;
  std::uint64_t seed = 0;
};

/// Inner-loop configuration. eta = 0 freezes the parameters (used by the
/// non-adaptive baseline).
struct OcConfig {
  double eta = 0.0;
  int H = 0;
  DacDomain dom;
  DacParams M_init;
  Matrix K;
};

/// Full rollout of one task.
struct TaskRecord {
  std::vector<Vector> states;        // x_1 .. x_{T+1}
  std::vector<Vector> inputs;        // u_1 .. u_T
  std::vector<Vector> disturbances;  // recovered w_1 .. w_T
  std::vector<double> realized_costs;   // c_t(x_t, u_t)
  std::vector<double> ideal_costs;      // f_t(M_{t-H}, ..., M_t)
  std::vector<double> surrogate_costs;  // g_t(M_t)
  std::vector<DacParams> params;        // M_1 .. M_{T+1}
  std::optional<DacParams> hindsight;   // M*_i, filled by the meta layer
  double eta = 0.0;
  int H = 0;
  std::uint64_t seed = 0;

  double total_realized_cost() const;
  double total_ideal_cost() const;
  double total_surrogate_cost() const;
  /// Cost-approximation residual sum c_t - sum f_t.
  double cost_approx_residual() const;
};

/// Algorithm: play the disturbance-action policy, observe, recover the
/// disturbance, and take one projected OGD step on g_t per round.
/// Requires cfg.K certified strongly stable for the task's system.
TaskRecord run_oc(const TaskSpec& task, const OcConfig& cfg);

/// eta = D_scale / sqrt(G_f (G_f/2 + L H^2) T).
double default_step_size(double D_scale, const ConstantsBundle& consts, long T);

}  // namespace metaoc

#endif  // METAOC_OC_HPP
