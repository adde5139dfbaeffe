#include <benchmark/benchmark.h>

#include <random>

#include "catmouse/constants.hpp"
#include "catmouse/env.hpp"
#include "catmouse/experiment.hpp"
#include "catmouse/guidance.hpp"
#include "catmouse/policy.hpp"
#include "catmouse/rfsense.hpp"

using namespace catmouse;

namespace {

const double kN = mean_motion(constants::kGeoSemiMajorAxis);

void BM_MpcSolve(benchmark::State& state) {
  const auto model = discrete_matrices(kN, 120.0, 2500.0);
  MpcConfig cfg;
  cfg.horizon = static_cast<int>(state.range(0));
  const MpcSolver solver(model, cfg);
  const HillState s{Vec3(3.0, -2.0, 1.0), Vec3(1e-4, 0.0, -5e-5)};
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(s, HillVector(10.0, 5.0, 0.0)));
}
BENCHMARK(BM_MpcSolve)->Arg(8)->Arg(20)->Arg(40);

void BM_Crlb(benchmark::State& state) {
  SensingConfig cfg;
  cfg.constellation = ConstellationConfig::with_size(static_cast<int>(state.range(0)));
  const SensingModel model(cfg);
  const EcefVector cat(Vec3(constants::kGeoSemiMajorAxis, 0.0, 0.0));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.snapshot(cat, t));
    t += 120.0;
  }
}
BENCHMARK(BM_Crlb)->Arg(60)->Arg(200);

void BM_Grs(benchmark::State& state) {
  const auto model = discrete_matrices(kN, 120.0, 2500.0);
  const TransferFuel fuel(model, 8);
  GrsConfig cfg;
  cfg.w_fuel = EpisodeConfig{}.fuel_weight();
  std::vector<Vec3> cats(10, Vec3(8.0, 6.0, -2.0));
  const HillState mouse{Vec3(1.0, 0.5, 0.0), Vec3::Zero()};
  for (auto _ : state) benchmark::DoNotOptimize(grs(cats, mouse, fuel, cfg));
}
BENCHMARK(BM_Grs);

void BM_EnvStep(benchmark::State& state) {
  EpisodeConfig cfg;
  cfg.max_steps = 1 << 30;
  Environment env(cfg);
  env.reset(1);
  for (auto _ : state) benchmark::DoNotOptimize(env.step(Vec3(0.5, -0.5, 0.0)));
}
BENCHMARK(BM_EnvStep);

void BM_Chi2Cdf(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(chi2_noncentral_cdf(u(rng), Vec3(u(rng), 0.0, 0.0), 3.0));
}
BENCHMARK(BM_Chi2Cdf);

void BM_CrlbSweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(crlb_sweep({60, 100}, 100, SensingConfig{}));
}
BENCHMARK(BM_CrlbSweep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
