// Serial reference vs OpenMP for the trial-parallel kernels.

#include <benchmark/benchmark.h>

#include <numbers>

#include "polarsphere/dynamics.hpp"
#include "polarsphere/experiments.hpp"
#include "polarsphere/laws.hpp"

using namespace polarsphere;

namespace {

ParallelConfig config_for(const benchmark::State& state) {
  return state.range(0) == 0 ? serial_config() : ParallelConfig{Exec::kOpenMP, 0};
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_CapChainRows(benchmark::State& state) {
  const Dimension d(2);
  const Cap cap(point_from_angles(d, std::vector<double>{1.0}), 0.7);
  const std::size_t trials = 4096;
  const std::size_t rows = 101;
  const auto cfg = config_for(state);
  for (auto _ : state) {
    auto m = accumulate_rows(trials, rows, cfg, [&](std::size_t t, std::span<double> out) {
      cap_chain_kernel(cap, d, 1, t, out);
    });
    benchmark::DoNotOptimize(m.sum.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
  label(state);
}

void BM_FinalPoleDistances(benchmark::State& state) {
  const Dimension d(3);
  const auto cfg = config_for(state);
  for (auto _ : state) {
    auto v = final_pole_distances(d, 0.2, 200, 8192, 1, cfg);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 8192));
  label(state);
}

void BM_TauSampler(benchmark::State& state) {
  const TauLaw law(Dimension(3), 1.5);
  const auto cfg = config_for(state);
  for (auto _ : state) {
    auto v = collect_trials(512, cfg, [&](std::size_t t) {
      Rng rng(1, streams::kTauSampler, t + 1);
      return sample_tau_distance(law, rng);
    });
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 512));
  label(state);
}

}  // namespace

BENCHMARK(BM_CapChainRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FinalPoleDistances)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TauSampler)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
