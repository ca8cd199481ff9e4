#include <benchmark/benchmark.h>

#include "seqmusic/bench.hpp"

using namespace seqmusic;

namespace {

struct Fixture {
  SensingMatrix<Real> sensing;
  MeasurementEnsemble<Real> measurements;
  Subspace<Real> subspace;
  RecoveryConfig cfg;
};

Fixture make_fixture(int m, int snapshots) {
  const auto A = gen_gaussian_sensing(m, 128, 0.0, 17);
  const auto truth = gen_ground_truth<Real>(128, 8, 4, snapshots, 1.0, 18);
  auto measurements = synthesize(A, truth, 30.0, 19);
  auto U = canonicalize(A, measurements, 4).signal_subspace;
  RecoveryConfig cfg;
  cfg.k = 8;
  cfg.r = 4;
  return Fixture{A, std::move(measurements), std::move(U), cfg};
}

void BM_canonicalize(benchmark::State& state) {
  const auto fx = make_fixture(24, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(canonicalize(fx.sensing, fx.measurements, 4));
}
BENCHMARK(BM_canonicalize)->Arg(6)->Arg(256);

void BM_subspace_s_omp(benchmark::State& state) {
  const auto fx = make_fixture(24, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(subspace_s_omp(fx.sensing, fx.subspace, 8));
}
BENCHMARK(BM_subspace_s_omp);

void BM_support_filtering(benchmark::State& state) {
  const auto fx = make_fixture(24, 6);
  const auto init = subspace_s_omp(fx.sensing, fx.subspace, 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(support_filtering(fx.sensing, fx.subspace, init, 8, 4));
}
BENCHMARK(BM_support_filtering);

void BM_seq_subspace(benchmark::State& state) {
  const auto fx = make_fixture(24, 6);
  const auto init = subspace_s_omp(fx.sensing, fx.subspace, 8);
  const auto filtered = support_filtering(fx.sensing, fx.subspace, init, 8, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(seq_subspace(fx.sensing, fx.subspace, filtered, 8));
}
BENCHMARK(BM_seq_subspace);

void BM_full_trial(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.k = 8;
  cfg.r = 4;
  cfg.snapshots = {6};
  cfg.m_values = {static_cast<int>(state.range(0))};
  cfg.trials = 1;
  cfg.algorithms = {Algorithm::seq_cs_music};
  const TrialPoint point{static_cast<int>(state.range(0)), 6, 1.0, 0.0};
  int trial = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_trial(cfg, point, trial++ % 1000, Algorithm::seq_cs_music));
}
BENCHMARK(BM_full_trial)->Arg(16)->Arg(24)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
