#include <cmath>

#include "doctest.h"
#include "metaoc/harness.hpp"
#include "metaoc/rng.hpp"

using namespace metaoc;

namespace {

struct Bench {
  ExperimentConfig cfg;
  ConstantsBundle consts;
  std::vector<TaskSpec> tasks;

  explicit Bench(int N, std::uint64_t seed = 0, long T = 25) {
    cfg.N = N;
    cfg.T = T;
    const int H = horizon(T, cfg.gamma);
    consts = compute_constants(cfg.bounds(), H, cfg.effective_d());
    tasks = generate_task_suite(cfg, seed, T).tasks;
  }
};

}  // namespace

TEST_CASE("non-adaptive rollout: zero disturbances, zero cost") {
  Bench bench(1);
  TaskSpec task = bench.tasks[0];
  task.disturbance.kind = DisturbanceKind::kZero;
  const StabilityCertificate cert =
      synthesize_stabilizer(task.sys, bench.cfg.bounds());
  const TaskRecord rec = run_non_adaptive(task, cert.K, bench.consts);
  CHECK(rec.total_realized_cost() == 0.0);
  for (const Vector& x : rec.states) CHECK(x.norm() == 0.0);
}

TEST_CASE("non-adaptive rollout coincides with a frozen learner") {
  Bench bench(1, 3);
  const TaskSpec& task = bench.tasks[0];
  const StabilityCertificate cert =
      synthesize_stabilizer(task.sys, bench.cfg.bounds());
  const TaskRecord a = run_non_adaptive(task, cert.K, bench.consts);

  OcConfig cfg;
  cfg.eta = 0.0;
  cfg.H = bench.consts.H;
  cfg.dom = DacDomain::make(bench.cfg.bounds(), bench.consts.H, 1, 2);
  cfg.M_init = DacParams::zero(bench.consts.H, 1, 2);
  cfg.K = cert.K;
  const TaskRecord b = run_oc(task, cfg);

  REQUIRE(a.states.size() == b.states.size());
  for (size_t i = 0; i < a.states.size(); ++i) {
    CHECK((a.states[i] - b.states[i]).norm() == 0.0);
  }
  for (size_t i = 0; i < a.inputs.size(); ++i) {
    CHECK((a.inputs[i] - b.inputs[i]).norm() == 0.0);
  }
  CHECK(a.total_realized_cost() == b.total_realized_cost());
}

TEST_CASE("independent learning beats the non-adaptive baseline on cost") {
  // Paired comparison over 10 suite seeds.
  double non_adaptive_cost = 0.0;
  double independent_cost = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Bench bench(3, seed);
    const MetaReport na = run_non_adaptive_suite(bench.tasks, bench.consts);
    const MetaReport il = run_independent_oc(bench.tasks, bench.consts);
    // Realized cost = regret + comparator cost; comparators match per task,
    // so comparing regrets compares realized costs.
    for (size_t i = 0; i < na.task_regrets.size(); ++i) {
      non_adaptive_cost += na.task_regrets[i];
      independent_cost += il.task_regrets[i];
    }
  }
  CHECK(non_adaptive_cost / 30.0 > independent_cost / 30.0);
}

TEST_CASE("independent-oc records equal run_oc with the diameter step size") {
  Bench bench(2, 7);
  const MetaReport rep = run_independent_oc(bench.tasks, bench.consts);
  const double eta =
      default_step_size(bench.consts.D_domain, bench.consts, bench.cfg.T);
  for (size_t i = 0; i < bench.tasks.size(); ++i) {
    const TaskOutcome direct = run_task_with_hindsight(
        bench.tasks[i], bench.consts, eta,
        DacParams::zero(bench.consts.H, 1, 2));
    CHECK(direct.regret == rep.task_regrets[i]);
    CHECK((direct.hindsight.M_star - rep.M_stars[i]).norm() == 0.0);
  }
}

TEST_CASE("task regret: scalar instance with closed-form comparator") {
  // n = m = 1, H = 1, A = 0, B = 1, K = 0, c = x^2 + u^2, w = 0.5, T = 2,
  // playing the fixed parameter M = 0.3.
  SystemBounds b;
  b.kappa = 1.0;
  SystemMatrices sys(Matrix::Zero(1, 1), Matrix::Identity(1, 1), b);
  const Matrix K = Matrix::Zero(1, 1);
  std::vector<Vector> log(2, Vector::Constant(1, 0.5));
  SurrogateContext ctx(K, sys, log, 1);
  std::vector<CostFunction> costs(
      2, CostFunction::quadratic(Matrix::Identity(1, 1),
                                 Matrix::Identity(1, 1)));
  const DacDomain dom = DacDomain::make(b, 1, 1, 1);

  const double M = 0.3;
  TaskRecord rec;
  rec.disturbances = log;
  rec.realized_costs = {0.0, 0.25 + 0.25 * M * M};

  ComparatorChoice hindsight_cmp;
  const double regret = task_regret(rec, hindsight_cmp, ctx, costs, dom);
  CHECK(regret == doctest::Approx(0.25 * M * M).epsilon(1e-9));

  ComparatorChoice grid;
  grid.kind = ComparatorChoice::Kind::kGridLinearFeedback;
  grid.gain_range = 1.0;
  grid.points_per_dim = 2001;
  const double regret_grid = task_regret(rec, grid, ctx, costs, dom);
  CHECK(regret_grid == doctest::Approx(0.25 * M * M).epsilon(1e-6));

  // Identical records give identical regrets.
  CHECK(task_regret(rec, hindsight_cmp, ctx, costs, dom) == regret);
}

TEST_CASE("playing the hindsight optimum leaves only the residual") {
  Bench bench(1, 11);
  const TaskSpec& task = bench.tasks[0];
  const TaskOutcome base = run_task_with_hindsight(
      task, bench.consts, 0.0, DacParams::zero(bench.consts.H, 1, 2));
  const TaskOutcome replay = run_task_with_hindsight(
      task, bench.consts, 0.0, base.hindsight.M_star);
  CHECK(std::abs(replay.regret - replay.r_t1) <=
        1e-6 * (1.0 + std::abs(replay.r_t1)));
}

TEST_CASE("reported regrets agree with the public accounting operation") {
  Bench bench(2, 5);
  const MetaReport rep = run_independent_oc(bench.tasks, bench.consts);
  const DacDomain dom = DacDomain::make(bench.cfg.bounds(), bench.consts.H, 1, 2);
  for (size_t i = 0; i < bench.tasks.size(); ++i) {
    const TaskSpec& task = bench.tasks[i];
    const StabilityCertificate cert =
        synthesize_stabilizer(task.sys, bench.cfg.bounds());
    const double eta =
        default_step_size(bench.consts.D_domain, bench.consts, task.T);
    TaskOutcome out = run_task_with_hindsight(
        task, bench.consts, eta, DacParams::zero(bench.consts.H, 1, 2));
    SurrogateContext ctx(cert.K, task.sys, out.record.disturbances,
                         bench.consts.H);
    const double via_op =
        task_regret(out.record, ComparatorChoice{}, ctx, task.costs, dom);
    CHECK(via_op == doctest::Approx(rep.task_regrets[i]).epsilon(1e-12));
  }
}

TEST_CASE("grid comparator refuses large systems") {
  SystemBounds b;
  b.kappa = std::sqrt(6.0);
  b.kappa_B = 2.0;
  SystemMatrices sys(Matrix::Zero(3, 3), Matrix::Ones(3, 2) * 0.5, b);
  const Matrix K = Matrix::Zero(2, 3);
  std::vector<Vector> log(2, Vector::Zero(3));
  SurrogateContext ctx(K, sys, log, 1);
  std::vector<CostFunction> costs(
      2, CostFunction::quadratic(Matrix::Identity(3, 3),
                                 Matrix::Identity(2, 2)));
  TaskRecord rec;
  rec.disturbances = log;
  rec.realized_costs = {0.0, 0.0};
  ComparatorChoice grid;
  grid.kind = ComparatorChoice::Kind::kGridLinearFeedback;
  CHECK_THROWS_AS(
      task_regret(rec, grid, ctx, costs, DacDomain::make(b, 1, 2, 3)),
      ConfigError);
}

TEST_CASE("meta regret is the arithmetic mean") {
  CHECK(meta_regret({3.5}) == 3.5);
  CHECK(meta_regret({1.0, 3.0}) == 2.0);
  Rng rng(4);
  std::vector<double> vals;
  for (int i = 0; i < 20; ++i) vals.push_back(rng.normal());
  const double base = meta_regret(vals);
  for (int trial = 0; trial < 5; ++trial) {
    for (size_t i = vals.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.uniform() * (i + 1));
      std::swap(vals[i], vals[j]);
    }
    CHECK(meta_regret(vals) == doctest::Approx(base).epsilon(1e-12));
  }
  CHECK_THROWS_AS(meta_regret({}), std::invalid_argument);
}
