#include <benchmark/benchmark.h>

#include <omp.h>

#include "contacton/chord.hpp"
#include "contacton/diagnostics.hpp"
#include "contacton/hamiltonian.hpp"
#include "contacton/strip.hpp"

using namespace contacton;

namespace {

instanton::StripMap sector(int level) {
  const auto g = instanton::StripGrid::make(0.0, 2.0, 64 << level, 32 << level);
  return instanton::sector_strip(g, instanton::Sector{1.0, 1.0});
}

void BM_residual_serial(benchmark::State& state) {
  const auto w = sector(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(instanton::residual_serial(w).l2());
  state.SetItemsProcessed(state.iterations() * w.grid().cells());
}

void BM_residual_omp(benchmark::State& state) {
  const auto w = sector(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(instanton::residual(w).l2());
  state.SetItemsProcessed(state.iterations() * w.grid().cells());
  state.counters["threads"] = omp_get_max_threads();
}

void BM_identity_checks(benchmark::State& state) {
  const auto w = sector(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(instanton::identity_checks(w).energy);
}

void BM_chord_sweep(benchmark::State& state) {
  const auto H = ham::parse_hamiltonian("reeb + quadratic:0.5", 1);
  const auto L0 = LegendrianJetGraph::zero_section(1);
  const auto L1 = LegendrianJetGraph::quadratic(1, 0.5, 0.3);
  std::vector<action::ChordSeed> seeds;
  for (int k = 0; k < 16; ++k) seeds.push_back({Eigen::VectorXd::Constant(1, -0.8 + 0.1 * k), 1.0});
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(action::chord_sweep(H, L0, L1, seeds).size());
  omp_set_num_threads(omp_get_num_procs());
}

}  // namespace

BENCHMARK(BM_residual_serial)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_residual_omp)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_identity_checks)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_chord_sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
