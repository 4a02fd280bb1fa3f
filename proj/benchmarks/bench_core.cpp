#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "cvqi/appendix.hpp"
#include "cvqi/bounds.hpp"
#include "cvqi/closedform.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"

using namespace cvqi;

namespace {

ScenarioParams scenario(double r, std::size_t ds, std::size_t de, bool two) {
  ScenarioParams p;
  p.r = r;
  p.n_pr = 0.1;
  p.n_env = 0.5;
  p.dim_sig = ds;
  p.dim_env = de;
  p.dim_idler = two ? ds : 0;
  return p;
}

void BM_HermitianEig(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  ComplexMatrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = Complex(g(rng), g(rng));
  const ComplexMatrix a = 0.5 * (x + x.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(10)->Arg(40)->Arg(80);

void BM_ReceivedStatesSingle(benchmark::State& state) {
  const auto probe = coherent_state(FockSpace(20), std::sqrt(0.1));
  const auto env = thermal_env(FockSpace(60), 0.5);
  const auto p = scenario(0.01, 20, 60, false);
  for (auto _ : state) benchmark::DoNotOptimize(received_states_single(probe, env, p));
}
BENCHMARK(BM_ReceivedStatesSingle);

void BM_ChernoffExactSingle(benchmark::State& state) {
  const auto probe = coherent_state(FockSpace(20), std::sqrt(0.1));
  const auto env = thermal_env(FockSpace(60), 0.5);
  const auto pair = received_states_single(probe, env, scenario(0.01, 20, 60, false));
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_exact(pair));
}
BENCHMARK(BM_ChernoffExactSingle)->Unit(benchmark::kMillisecond);

void BM_ChernoffExactTwo(benchmark::State& state) {
  const auto ds = static_cast<std::size_t>(state.range(0));
  const auto probe = tmsv_probe(FockSpace(ds), 0.1);
  const auto env = thermal_env(FockSpace(60), 0.5);
  const auto pair = received_states_two(probe, env, scenario(0.01, ds, 60, true));
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_exact(pair));
}
BENCHMARK(BM_ChernoffExactTwo)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_HelstromTwo(benchmark::State& state) {
  const auto probe = tmsv_probe(FockSpace(20), 0.1);
  const auto env = thermal_env(FockSpace(60), 0.5);
  const auto pair = received_states_two(probe, env, scenario(0.01, 20, 60, true));
  for (auto _ : state) benchmark::DoNotOptimize(helstrom(pair));
}
BENCHMARK(BM_HelstromTwo)->Unit(benchmark::kMillisecond);

void BM_ChernoffLowRTwo(benchmark::State& state) {
  const auto probe = tmsv_probe(FockSpace(20), 0.1);
  const auto env = thermal_env(FockSpace(60), 0.5);
  const auto delta = delta_rho_two(probe, env);
  const auto eig = product_eigensystem(env, probe);
  for (auto _ : state) benchmark::DoNotOptimize(chernoff_low_r(delta, eig, 0.01));
}
BENCHMARK(BM_ChernoffLowRTwo)->Unit(benchmark::kMillisecond);

void BM_ExactObjectiveEvaluate(benchmark::State& state) {
  const bool two = state.range(0) != 0;
  const auto p = scenario(0.3, 12, 60, two);
  const auto obj = bound_objective(two ? ProbeMode::Two : ProbeMode::Single, ObjectiveKind::Exact, p);
  const auto start = gaussian_probe(two ? ProbeMode::Two : ProbeMode::Single, p);
  const RealVector c = Eigen::Map<const RealVector>(start.coeffs.data(),
                                                    static_cast<Eigen::Index>(start.dim()));
  for (auto _ : state) benchmark::DoNotOptimize(obj->evaluate(c));
}
BENCHMARK(BM_ExactObjectiveEvaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AdvantageGrid(benchmark::State& state) {
  const auto nps = log_space(1e-3, 10.0, 60);
  const auto nes = log_space(1e-3, 100.0, 60);
  for (auto _ : state) benchmark::DoNotOptimize(advantage_grid(nps, nes));
}
BENCHMARK(BM_AdvantageGrid);

void BM_ReductionTrial(benchmark::State& state) {
  ReductionConfig cfg;
  cfg.r = 0.3;
  cfg.trials = 1;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_reduction_trial(cfg, seed++));
}
BENCHMARK(BM_ReductionTrial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
