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
#ifndef METAOC_SURROGATE_HPP
#define METAOC_SURROGATE_HPP

#include <functional>
#include <vector>

#include "metaoc/dac.hpp"

namespace metaoc {

/// Convex per-step cost c(x, u). Quadratic costs x'Qx + u'Ru carry their
/// matrices (closed-form gradients, serializable); arbitrary costs supply
/// an evaluator and optionally analytic gradients.
class CostFunction {
 public:
  using ValueFn = std::function<double(const Vector&, const Vector&)>;
  using GradFn = std::function<Vector(const Vector&, const Vector&)>;

  static CostFunction quadratic(Matrix Q, Matrix R);
  static CostFunction custom(ValueFn value, GradFn grad_x = nullptr,
                             GradFn grad_u = nullptr);

  double value(const Vector& x, const Vector& u) const;
  Vector grad_x(const Vector& x, const Vector& u) const;
  Vector grad_u(const Vector& x, const Vector& u) const;
  bool has_analytic_gradients() const;

  bool is_quadratic() const { return is_quadratic_; }
  const Matrix& Q() const { return Q_; }
  const Matrix& R() const { return R_; }

 private:
  CostFunction() = default;
  bool is_quadratic_ = false;
  Matrix Q_, R_;
  ValueFn value_;
  GradFn grad_x_, grad_u_;
};

/// Everything the idealized-cost machinery needs about one task: the gain,
/// the system, and the recovered disturbance log (1-based; indices <= 0
/// read as zero). The log is owned by the caller and must outlive the
/// context.
class SurrogateContext {
 public:
  SurrogateContext(const Matrix& K, const SystemMatrices& sys,
                   const std::vector<Vector>& disturbance_log, int H);

  const Matrix& K() const { return *K_; }
  const SystemMatrices& sys() const { return *sys_; }
  int H() const { return H_; }
  /// w_j, or zero for j <= 0. j must not exceed the log length.
  const Vector& w_at(long j) const;
  long log_size() const { return static_cast<long>(log_->size()); }

 private:
  const Matrix* K_;
  const SystemMatrices* sys_;
  const std::vector<Vector>* log_;
  Vector zero_;
  int H_;
};

/// Counterfactual state at time t after replaying the parameter window
/// (M_{t-H}, ..., M_{t-1}) from a zero state at t-H with the logged
/// disturbances.
Vector ideal_state(const SurrogateContext& ctx,
                   const std::vector<DacParams>& params_window, long t);

/// Action the policy M_t would take at the idealized state s_t.
Vector ideal_action(const SurrogateContext& ctx, const DacParams& M_t,
                    const Vector& s_t, long t);

/// f_t(M_{t-H}, ..., M_t) = c_t(s_t, a_t); window has H+1 entries.
double ideal_cost_f(const SurrogateContext& ctx,
                    const std::vector<DacParams>& window,
                    const CostFunction& cost, long t);

/// g_t(M) = f_t(M, ..., M).
double surrogate_cost_g(const SurrogateContext& ctx, const DacParams& M,
                        const CostFunction& cost, long t);

/// Exact gradient of g_t at M via the chain rule through the affine maps
/// M -> (s_t, a_t). Falls back to central finite differences when the cost
/// carries no analytic gradients.
DacParams surrogate_grad(const SurrogateContext& ctx, const DacParams& M,
                         const CostFunction& cost, long t);

/// Central-difference gradient of g_t, step 1e-5 relative to entry scale.
/// Kept independent of the analytic path; used as its oracle.
DacParams finite_diff_grad(const SurrogateContext& ctx, const DacParams& M,
                           const CostFunction& cost, long t);

}  // namespace metaoc

#endif  // METAOC_SURROGATE_HPP
