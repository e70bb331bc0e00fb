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
#include "metaoc/meta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metaoc {

namespace {

double objective_at(const SurrogateContext& ctx,
                    const std::vector<CostFunction>& costs,
                    const DacParams& M) {
  double F = 0.0;
  for (long t = 1; t <= static_cast<long>(costs.size()); ++t) {
    F += surrogate_cost_g(ctx, M, costs[static_cast<size_t>(t - 1)], t);
  }
  return F;
}

DacParams gradient_at(const SurrogateContext& ctx,
                      const std::vector<CostFunction>& costs,
                      const DacParams& M) {
  DacParams g = DacParams::zero(M.H(), M.m(), M.n());
  for (long t = 1; t <= static_cast<long>(costs.size()); ++t) {
    g += surrogate_grad(ctx, M, costs[static_cast<size_t>(t - 1)], t);
  }
  return g;
}

}  // namespace

HindsightResult hindsight_optimum(const TaskRecord& record,
                                  const SurrogateContext& ctx,
                                  const std::vector<CostFunction>& costs,
                                  const DacDomain& dom,
                                  const HindsightOptions& opts) {
  if (record.disturbances.size() != costs.size()) {
    throw std::invalid_argument(
        "hindsight_optimum: record incomplete (one disturbance per cost)");
  }
  const int H = dom.H;
  const int m = dom.m;
  const int n = dom.n;
  const long q = static_cast<long>(H) * m * n;

  HindsightResult res;
  DacParams M = DacParams::zero(H, m, n);
  const DacParams g0 = gradient_at(ctx, costs, M);
  if (g0.norm() == 0.0) {
    // Flat objective: keep the zero-initialized iterate.
    res.M_star = M;
    res.objective = objective_at(ctx, costs, M);
    res.converged = true;
    return res;
  }

  const bool all_quadratic =
      std::all_of(costs.begin(), costs.end(),
                  [](const CostFunction& c) { return c.is_quadratic(); });

  // Both paths run momentum-accelerated projected gradient descent with an
  // adaptive restart; the plain method stalls on the ill-conditioned
  // Hessians the geometrically-decaying block radii produce.
  double step;
  int it = 0;
  if (all_quadratic) {
    // The summed surrogate is quadratic, so its gradient is affine in M.
    // Probe the q basis directions once and iterate on the exact model.
    const Vector b = g0.vectorize();
    Matrix A_hess(q, q);
    for (long j = 0; j < q; ++j) {
      Vector e = Vector::Zero(q);
      e(j) = 1.0;
      const DacParams Ej = DacParams::from_vector(e, H, m, n);
      A_hess.col(j) = (gradient_at(ctx, costs, Ej) - g0).vectorize();
    }
    const Matrix A_sym = 0.5 * (A_hess + A_hess.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(A_sym);
    const double lam_max = es.eigenvalues().maxCoeff();
    step = 1.0 / std::max(lam_max, 1e-12);

    auto project_vec = [&](const Vector& v) {
      return project(DacParams::from_vector(v, H, m, n), dom).vectorize();
    };
    Vector v = Vector::Zero(q);
    Vector y = v;
    double theta = 1.0;
    for (it = 0; it < opts.max_iterations; ++it) {
      const Vector gv = b + A_sym * v;
      const Vector cand = project_vec(v - step * gv);
      if ((v - cand).norm() / step <= opts.stationarity_tol) break;

      const Vector gy = b + A_sym * y;
      const Vector v_next = project_vec(y - step * gy);
      if ((y - v_next).dot(v_next - v) > 0.0) {
        // Momentum points uphill: restart.
        y = v_next;
        theta = 1.0;
      } else {
        const double theta_next =
            0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        y = v_next + ((theta - 1.0) / theta_next) * (v_next - v);
        theta = theta_next;
      }
      v = v_next;
    }
    M = DacParams::from_vector(v, H, m, n);
  } else {
    // Generic path: curvature probe for the step, halving on increase.
    const double delta = 1e-3;
    DacParams dir = g0;
    dir *= 1.0 / g0.norm();
    const DacParams g_probe = gradient_at(ctx, costs, M + delta * dir);
    const double lam = (g_probe - g0).norm() / delta;
    step = 1.0 / std::max(lam, 1e-12);
    double F_cur = objective_at(ctx, costs, M);
    DacParams Y = M;
    double theta = 1.0;
    for (it = 0; it < opts.max_iterations; ++it) {
      const DacParams gM = gradient_at(ctx, costs, M);
      const DacParams cand = project(M - step * gM, dom);
      if ((M - cand).norm() / step <= opts.stationarity_tol) break;

      const DacParams gY = gradient_at(ctx, costs, Y);
      DacParams nxt = project(Y - step * gY, dom);
      double F_nxt = objective_at(ctx, costs, nxt);
      if (F_nxt > F_cur + 1e-12 * (1.0 + std::abs(F_cur))) {
        Y = M;
        theta = 1.0;
        nxt = cand;
        F_nxt = objective_at(ctx, costs, nxt);
        if (F_nxt > F_cur + 1e-12 * (1.0 + std::abs(F_cur))) {
          step *= 0.5;
          continue;
        }
      }
      const double theta_next =
          0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      Y = nxt + ((theta - 1.0) / theta_next) * (nxt - M);
      M = nxt;
      F_cur = F_nxt;
      theta = theta_next;
    }
  }

  const DacParams g_final = gradient_at(ctx, costs, M);
  const DacParams cand = project(M - step * g_final, dom);
  res.M_star = M;
  res.stationarity = (M - cand).norm() / step;
  res.iterations = it;
  res.converged = res.stationarity <= opts.stationarity_tol;
  res.objective = objective_at(ctx, costs, M);
  return res;
}

DacParams meta_loss_grad(const DacParams& M_meta, const DacParams& M_star) {
  if (!M_meta.same_shape(M_star)) {
    throw std::invalid_argument("meta_loss_grad: shape mismatch");
  }
  return M_meta - M_star;
}

MetaState meta_update(const MetaState& state, const DacParams& M_star,
                      const DacDomain& dom) {
  if (state.i < 1) throw std::invalid_argument("meta_update: i must be >= 1");
  MetaState next = state;
  const DacParams g = meta_loss_grad(state.M_meta, M_star);
  next.M_meta = project(state.M_meta - (1.0 / state.i) * g, dom);
  next.running_sum = state.running_sum + M_star;
  next.i = state.i + 1;
  return next;
}

std::vector<double> MetaReport::cumulative_meta_regret() const {
  std::vector<double> out;
  out.reserve(task_regrets.size());
  double acc = 0.0;
  for (size_t i = 0; i < task_regrets.size(); ++i) {
    acc += task_regrets[i];
    out.push_back(acc / static_cast<double>(i + 1));
  }
  return out;
}

TaskOutcome run_task_with_hindsight(const TaskSpec& task,
                                    const ConstantsBundle& consts, double eta,
                                    const DacParams& M_init) {
  const StabilityCertificate cert = synthesize_stabilizer(task.sys, consts.bounds);
  const DacDomain dom =
      DacDomain::make(consts.bounds, consts.H, task.sys.m(), task.sys.n());

  OcConfig cfg;
  cfg.eta = eta;
  cfg.H = consts.H;
  cfg.dom = dom;
  cfg.M_init = M_init;
  cfg.K = cert.K;

  TaskOutcome out;
  out.record = run_oc(task, cfg);
  SurrogateContext ctx(cfg.K, task.sys, out.record.disturbances, consts.H);
  out.hindsight = hindsight_optimum(out.record, ctx, task.costs, dom);
  out.record.hindsight = out.hindsight.M_star;

  out.regret = out.record.total_realized_cost() - out.hindsight.objective;
  out.r_t1 = out.record.cost_approx_residual();
  out.r_t2 = out.record.total_surrogate_cost() - out.hindsight.objective;
  if (eta > 0.0) {
    const double dist = (out.hindsight.M_star - M_init).norm();
    const double T = static_cast<double>(task.T);
    out.policy_regret_bound = dist * dist / (2.0 * eta) +
                       T * consts.G_f * consts.G_f * eta / 2.0 +
                       eta * consts.L * consts.H * consts.H * consts.G_f * T;
  } else {
    out.policy_regret_bound = std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

void require_uniform_suite(const std::vector<TaskSpec>& tasks) {
  if (tasks.empty()) throw std::invalid_argument("meta run: no tasks");
  const long T = tasks[0].T;
  const int n = tasks[0].sys.n();
  const int m = tasks[0].sys.m();
  for (const TaskSpec& task : tasks) {
    if (task.T != T || task.sys.n() != n || task.sys.m() != m) {
      throw std::invalid_argument(
          "meta run: tasks must share T and dimensions");
    }
  }
}

void append_outcome(MetaReport& report, const TaskOutcome& outcome,
                    const DacParams& M_meta, double eta, double D_i) {
  report.task_regrets.push_back(outcome.regret);
  report.M_stars.push_back(outcome.hindsight.M_star);
  report.M_metas.push_back(M_meta);
  report.etas.push_back(eta);
  report.r_t1.push_back(outcome.r_t1);
  report.r_t2.push_back(outcome.r_t2);
  report.policy_regret_bounds.push_back(outcome.policy_regret_bound);
  report.dist_to_meta.push_back((outcome.hindsight.M_star - M_meta).norm());
  report.hindsight_converged.push_back(outcome.hindsight.converged);
  report.D_trace.push_back(D_i);
}

void finalize_report(MetaReport& report) {
  double acc = 0.0;
  for (double r : report.task_regrets) acc += r;
  report.meta_regret = acc / static_cast<double>(report.task_regrets.size());
  report.D_bar = rms_deviation(report.M_stars);
  report.D_star_max_pairwise = max_pairwise_distance(report.M_stars);
  report.D_star_ritter = ritter_diameter(report.M_stars);
}

}  // namespace

MetaReport run_moc1(const std::vector<TaskSpec>& tasks, double D_star,
                    const ConstantsBundle& consts) {
  require_uniform_suite(tasks);
  if (!(D_star > 0.0)) throw std::invalid_argument("run_moc1: D_star must be positive");
  const long T = tasks[0].T;
  const int n = tasks[0].sys.n();
  const int m = tasks[0].sys.m();
  const DacDomain dom = DacDomain::make(consts.bounds, consts.H, m, n);
  const double eta = default_step_size(D_star, consts, T);

  MetaReport report;
  report.consts = consts;
  report.T = T;

  MetaState state;
  state.M_meta = DacParams::zero(consts.H, m, n);
  state.running_sum = DacParams::zero(consts.H, m, n);
  state.i = 1;

  for (size_t i = 0; i < tasks.size(); ++i) {
    TaskOutcome outcome;
    try {
      outcome = run_task_with_hindsight(tasks[i], consts, eta, state.M_meta);
    } catch (const SynthesisError& e) {
      throw SynthesisError("run_moc1: task " + std::to_string(i + 1) + ": " +
                           e.what());
    }
    append_outcome(report, outcome, state.M_meta, eta, D_star);
    state = meta_update(state, outcome.hindsight.M_star, dom);
  }
  finalize_report(report);
  return report;
}

double diameter_guess(double epsilon, double zeta, int k) {
  return std::pow(zeta, k) * epsilon;
}

int bump_increment_count(int k, int task_index, double deviation, double D_i) {
  if (task_index > 1 && deviation > D_i) return k + 1;
  return k;
}

MetaReport run_moc2(const std::vector<TaskSpec>& tasks, double epsilon,
                    double zeta, const ConstantsBundle& consts) {
  require_uniform_suite(tasks);
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("run_moc2: epsilon must be positive");
  }
  const long T = tasks[0].T;
  if (zeta <= 0.0) {
    const double logT = std::log(static_cast<double>(T));
    zeta = (1.0 + logT) / logT;
  }
  if (!(zeta > 1.0)) throw std::invalid_argument("run_moc2: zeta must exceed 1");
  const int n = tasks[0].sys.n();
  const int m = tasks[0].sys.m();

  MetaReport report;
  report.consts = consts;
  report.T = T;

  MetaState state;
  state.M_meta = DacParams::zero(consts.H, m, n);
  state.running_sum = DacParams::zero(consts.H, m, n);
  state.i = 1;
  state.epsilon = epsilon;
  state.zeta = zeta;
  state.k = 0;

  for (size_t i = 0; i < tasks.size(); ++i) {
    const int task_index = static_cast<int>(i) + 1;
    state.D_i = diameter_guess(epsilon, zeta, state.k);
    const double eta = default_step_size(state.D_i, consts, T);

    TaskOutcome outcome;
    try {
      outcome = run_task_with_hindsight(tasks[i], consts, eta, state.M_meta);
    } catch (const SynthesisError& e) {
      throw SynthesisError("run_moc2: task " + std::to_string(task_index) +
                           ": " + e.what());
    }
    append_outcome(report, outcome, state.M_meta, eta, state.D_i);
    report.k_trace.push_back(state.k);

    const double deviation = (outcome.hindsight.M_star - state.M_meta).norm();
    state.k = bump_increment_count(state.k, task_index, deviation, state.D_i);
    state.running_sum += outcome.hindsight.M_star;
    state.M_meta = (1.0 / task_index) * state.running_sum;
    state.i = task_index + 1;
  }
  report.total_increments = state.k;
  finalize_report(report);
  return report;
}

double rms_deviation(const std::vector<DacParams>& points) {
  if (points.empty()) return 0.0;
  DacParams mean = points[0];
  for (size_t i = 1; i < points.size(); ++i) mean += points[i];
  mean *= 1.0 / static_cast<double>(points.size());
  double acc = 0.0;
  for (const DacParams& p : points) {
    const double d = (p - mean).norm();
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

double max_pairwise_distance(const std::vector<DacParams>& points) {
  double best = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, (points[i] - points[j]).norm());
    }
  }
  return best;
}

double ritter_diameter(const std::vector<DacParams>& points) {
  if (points.size() < 2) return 0.0;
  std::vector<Vector> pts;
  pts.reserve(points.size());
  for (const DacParams& p : points) pts.push_back(p.vectorize());

  auto farthest_from = [&](const Vector& x) {
    size_t best = 0;
    double best_d = -1.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      const double d = (pts[i] - x).norm();
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };

  const Vector& p0 = pts[0];
  const Vector p1 = pts[farthest_from(p0)];
  const Vector p2 = pts[farthest_from(p1)];
  Vector center = 0.5 * (p1 + p2);
  double radius = 0.5 * (p2 - p1).norm();

  // Second pass: grow the ball to swallow stragglers.
  for (const Vector& p : pts) {
    const double d = (p - center).norm();
    if (d > radius) {
      const double new_radius = 0.5 * (radius + d);
      center += (1.0 - new_radius / d) * (p - center);
      radius = new_radius;
    }
  }
  return 2.0 * radius;
}

}  // namespace metaoc
