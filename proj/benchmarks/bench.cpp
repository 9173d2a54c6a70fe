#include <benchmark/benchmark.h>

#include "replan/pipeline.hpp"

using namespace replan;

namespace {

// Shared small-scale setup: nominal solve once, reused by every benchmark.
struct Fixture {
  ExperimentConfig cfg;
  NominalResult nom;
  GradFn grad;
  CostFn costf;
  JacobianGrid grid;
  SensitivityMatrix d0;

  Fixture()
      : cfg(make_config()),
        nom(run_nominal(cfg)),
        grad(gradient_fn(nom.spec, nom.theta0)),
        costf(cost_fn(nom.spec, nom.theta0)),
        grid(run_precompute(cfg, nom, {shuttle::kA1, shuttle::kB0, shuttle::kB2}, 2)),
        d0(hdsa_at(grad, nom.u_star, nom.theta0.theta, cfg.hdsa)) {}

  static ExperimentConfig make_config() {
    ExperimentConfig c;
    c.opt.max_iters = 400;
    return c;
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_Integrate(benchmark::State& state) {
  auto& f = fixture();
  const Controller ctl = f.nom.spec.make_controller(f.nom.u_star);
  const Eigen::VectorXd p = dimensionalize(f.nom.theta0);
  for (auto _ : state) {
    Trajectory t = integrate(f.nom.spec.dynamics, f.nom.spec.x0, f.nom.spec.integ_grid,
                             ctl, p);
    benchmark::DoNotOptimize(t.states.back());
  }
}
BENCHMARK(BM_Integrate);

void BM_CostGradient(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    Eigen::VectorXd g = f.grad(f.nom.u_star, f.nom.theta0.theta);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_CostGradient);

void BM_Hdsa(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    SensitivityMatrix d = hdsa_at(f.grad, f.nom.u_star, f.nom.theta0.theta, f.cfg.hdsa);
    benchmark::DoNotOptimize(d.d);
  }
}
BENCHMARK(BM_Hdsa);

void BM_Interpolate(benchmark::State& state) {
  auto& f = fixture();
  Eigen::Vector3d q(0.3, -0.4, 0.7);
  for (auto _ : state) {
    SensitivityMatrix d = interpolate(f.grid, q);
    benchmark::DoNotOptimize(d.d);
  }
}
BENCHMARK(BM_Interpolate);

void BM_ReplanReoptimize(benchmark::State& state) {
  auto& f = fixture();
  Eigen::VectorXd theta1 = Eigen::VectorXd::Zero(shuttle::kNumParams);
  theta1[shuttle::kA1] = 0.5;
  theta1[shuttle::kB2] = -0.5;
  for (auto _ : state) {
    OptimReport rep = minimize(
        [&](const Eigen::VectorXd& u) { return f.costf(u, theta1); },
        [&](const Eigen::VectorXd& u) { return f.grad(u, theta1); }, f.nom.u_star,
        f.cfg.opt);
    benchmark::DoNotOptimize(rep.u);
  }
}
BENCHMARK(BM_ReplanReoptimize);

void BM_ReplanInterpolated(benchmark::State& state) {
  auto& f = fixture();
  Eigen::Vector3d theta1(0.5, 0.0, -0.5);
  HomotopyConfig hc;
  hc.steps = 16;
  const JacProvider provider = grid_provider(f.grid);
  for (auto _ : state) {
    Eigen::VectorXd u =
        homotopy_approx(f.nom.u_star, Eigen::Vector3d::Zero(), theta1, hc, provider);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_ReplanInterpolated);

void BM_ReplanLinear(benchmark::State& state) {
  auto& f = fixture();
  Eigen::VectorXd theta1 = Eigen::VectorXd::Zero(shuttle::kNumParams);
  theta1[shuttle::kA1] = 0.5;
  for (auto _ : state) {
    Eigen::VectorXd u = linear_approx(f.nom.u_star, f.d0,
                                      Eigen::VectorXd::Zero(shuttle::kNumParams), theta1);
    benchmark::DoNotOptimize(u);
  }
}
BENCHMARK(BM_ReplanLinear);

}  // namespace

BENCHMARK_MAIN();
