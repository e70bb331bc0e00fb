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
#include "metaoc/surrogate.hpp"

#include <cmath>

namespace metaoc {

CostFunction CostFunction::quadratic(Matrix Q, Matrix R) {
  if (Q.rows() != Q.cols() || R.rows() != R.cols()) {
    throw std::invalid_argument("CostFunction::quadratic: Q, R must be square");
  }
  CostFunction c;
  c.is_quadratic_ = true;
  c.Q_ = std::move(Q);
  c.R_ = std::move(R);
  return c;
}

CostFunction CostFunction::custom(ValueFn value, GradFn grad_x, GradFn grad_u) {
  if (!value) throw std::invalid_argument("CostFunction::custom: null evaluator");
  if (static_cast<bool>(grad_x) != static_cast<bool>(grad_u)) {
    throw std::invalid_argument(
        "CostFunction::custom: supply both gradients or neither");
  }
  CostFunction c;
  c.value_ = std::move(value);
  c.grad_x_ = std::move(grad_x);
  c.grad_u_ = std::move(grad_u);
  return c;
}

double CostFunction::value(const Vector& x, const Vector& u) const {
  if (is_quadratic_) {
    return x.dot(Q_ * x) + u.dot(R_ * u);
  }
  return value_(x, u);
}

Vector CostFunction::grad_x(const Vector& x, const Vector& u) const {
  if (is_quadratic_) return 2.0 * (Q_ * x);
  if (!grad_x_) throw NumericError("CostFunction: no analytic grad_x");
  return grad_x_(x, u);
}

Vector CostFunction::grad_u(const Vector& x, const Vector& u) const {
  if (is_quadratic_) return 2.0 * (R_ * u);
  if (!grad_u_) throw NumericError("CostFunction: no analytic grad_u");
  return grad_u_(x, u);
}

bool CostFunction::has_analytic_gradients() const {
  return is_quadratic_ || (grad_x_ && grad_u_);
}

SurrogateContext::SurrogateContext(const Matrix& K, const SystemMatrices& sys,
                                   const std::vector<Vector>& disturbance_log,
                                   int H)
    : K_(&K), sys_(&sys), log_(&disturbance_log),
      zero_(Vector::Zero(sys.n())), H_(H) {
  if (K.rows() != sys.m() || K.cols() != sys.n()) {
    throw std::invalid_argument("SurrogateContext: K must be m x n");
  }
  if (H < 1) throw std::invalid_argument("SurrogateContext: H must be >= 1");
}

const Vector& SurrogateContext::w_at(long j) const {
  if (j <= 0) return zero_;
  return log_->at(static_cast<size_t>(j - 1));
}

namespace {

// sum_k M^[k] w_{j-k}
Vector disturbance_feed(const SurrogateContext& ctx, const DacParams& M, long j) {
  Vector q = Vector::Zero(M.m());
  for (int k = 1; k <= M.H(); ++k) {
    const Vector& w = ctx.w_at(j - k);
    if (!w.isZero(0.0)) q.noalias() += M.block(k) * w;
  }
  return q;
}

}  // namespace

Vector ideal_state(const SurrogateContext& ctx,
                   const std::vector<DacParams>& params_window, long t) {
  const int H = ctx.H();
  if (static_cast<int>(params_window.size()) != H) {
    throw std::invalid_argument("ideal_state: window must hold H parameters");
  }
  if (t < 1) throw std::invalid_argument("ideal_state: t must be >= 1");
  const Matrix& A = ctx.sys().A();
  const Matrix& B = ctx.sys().B();
  const Matrix& K = ctx.K();
  Vector x = Vector::Zero(ctx.sys().n());
  // Replay j = t-H .. t-1 from the zero state; window[i] is M_{t-H+i}.
  for (int i = 0; i < H; ++i) {
    const long j = t - H + i;
    const Vector u = -K * x + disturbance_feed(ctx, params_window[i], j);
    x = A * x + B * u + ctx.w_at(j);
  }
  return x;
}

Vector ideal_action(const SurrogateContext& ctx, const DacParams& M_t,
                    const Vector& s_t, long t) {
  if (s_t.size() != ctx.sys().n() || M_t.m() != ctx.sys().m() ||
      M_t.n() != ctx.sys().n()) {
    throw std::invalid_argument("ideal_action: shape mismatch");
  }
  return -ctx.K() * s_t + disturbance_feed(ctx, M_t, t);
}

double ideal_cost_f(const SurrogateContext& ctx,
                    const std::vector<DacParams>& window,
                    const CostFunction& cost, long t) {
  const int H = ctx.H();
  if (static_cast<int>(window.size()) != H + 1) {
    throw std::invalid_argument("ideal_cost_f: window must hold H+1 parameters");
  }
  const std::vector<DacParams> state_window(window.begin(), window.end() - 1);
  const Vector s = ideal_state(ctx, state_window, t);
  const Vector a = ideal_action(ctx, window.back(), s, t);
  return cost.value(s, a);
}

double surrogate_cost_g(const SurrogateContext& ctx, const DacParams& M,
                        const CostFunction& cost, long t) {
  const std::vector<DacParams> window(static_cast<size_t>(ctx.H()) + 1, M);
  return ideal_cost_f(ctx, window, cost, t);
}

DacParams surrogate_grad(const SurrogateContext& ctx, const DacParams& M,
                         const CostFunction& cost, long t) {
  if (!cost.has_analytic_gradients()) {
    return finite_diff_grad(ctx, M, cost, t);
  }
  const int H = ctx.H();
  const Matrix& B = ctx.sys().B();
  const Matrix& K = ctx.K();
  const Matrix A_cl = ctx.sys().A() - B * K;

  const std::vector<DacParams> state_window(static_cast<size_t>(H), M);
  const Vector s = ideal_state(ctx, state_window, t);
  const Vector a = ideal_action(ctx, M, s, t);
  const Vector gx = cost.grad_x(s, a);
  const Vector gu = cost.grad_u(s, a);

  // s_t = sum_i A_cl^i (B q_{t-1-i} + w_{t-1-i}) with the window tied to M,
  // so d g / d M^[k] = sum_i (B' A_cl'^i (gx - K' gu)) w_{t-1-i-k}' + gu w_{t-k}'.
  Vector y = gx - K.transpose() * gu;
  DacParams grad = DacParams::zero(H, M.m(), M.n());
  for (int i = 0; i < H; ++i) {
    const Vector z = B.transpose() * y;
    for (int k = 1; k <= H; ++k) {
      const Vector& w = ctx.w_at(t - 1 - i - k);
      if (!w.isZero(0.0)) grad.block(k).noalias() += z * w.transpose();
    }
    y = A_cl.transpose() * y;
  }
  for (int k = 1; k <= H; ++k) {
    const Vector& w = ctx.w_at(t - k);
    if (!w.isZero(0.0)) grad.block(k).noalias() += gu * w.transpose();
  }
  for (int k = 1; k <= H; ++k) {
    if (!grad.block(k).allFinite()) {
      throw NumericError("surrogate_grad: non-finite gradient");
    }
  }
  return grad;
}

DacParams finite_diff_grad(const SurrogateContext& ctx, const DacParams& M,
                           const CostFunction& cost, long t) {
  DacParams grad = DacParams::zero(M.H(), M.m(), M.n());
  DacParams probe = M;
  for (int k = 1; k <= M.H(); ++k) {
    for (int p = 0; p < M.m(); ++p) {
      for (int q = 0; q < M.n(); ++q) {
        const double saved = probe.block(k)(p, q);
        const double h = 1e-5 * (1.0 + std::abs(saved));
        probe.block(k)(p, q) = saved + h;
        const double fp = surrogate_cost_g(ctx, probe, cost, t);
        probe.block(k)(p, q) = saved - h;
        const double fm = surrogate_cost_g(ctx, probe, cost, t);
        probe.block(k)(p, q) = saved;
        grad.block(k)(p, q) = (fp - fm) / (2.0 * h);
      }
    }
  }
  return grad;
}

}  // namespace metaoc
