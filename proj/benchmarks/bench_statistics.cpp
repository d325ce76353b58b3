// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "blockcorr/block_statistics.hpp"
#include "blockcorr/sampling.hpp"
#include "blockcorr/schott_test.hpp"

using namespace blockcorr;

namespace {

DataMatrix fixture(const BlockSpec& spec, int n) {
    const Population pop = scenario_population(Scenario::I, spec, RngStream{1, 0});
    return gaussian_sample(pop, n, RngStream{1, 1});
}

void BM_BlockCorrelation(benchmark::State& state) {
    const int scale = static_cast<int>(state.range(0));
    const BlockSpec spec({2 * scale, 2 * scale, 3 * scale});
    const DataMatrix x = fixture(spec, 7 * scale + 20);
    for (auto _ : state) benchmark::DoNotOptimize(block_correlation(x, spec).matrix.sum());
    state.SetComplexityN(spec.dimension());
}
BENCHMARK(BM_BlockCorrelation)->Arg(1)->Arg(5)->Arg(10)->Arg(25)->Complexity();

// Tall data goes through B, wide data through the reduced companion; the
// crossover is where the two routes trade places.
void BM_SchottStatisticTall(benchmark::State& state) {
    const int scale = static_cast<int>(state.range(0));
    const BlockSpec spec({2 * scale, 2 * scale, 3 * scale});
    const DataMatrix x = fixture(spec, 2 * spec.dimension() + 10);
    for (auto _ : state) benchmark::DoNotOptimize(schott_statistic(x, spec));
}
BENCHMARK(BM_SchottStatisticTall)->Arg(1)->Arg(5)->Arg(10)->Arg(25);

void BM_SchottStatisticWide(benchmark::State& state) {
    const int scale = static_cast<int>(state.range(0));
    const BlockSpec spec({10 * scale, 10 * scale, 15 * scale});
    const DataMatrix x = fixture(spec, 10 * scale + 10);  // p > n - 1
    for (auto _ : state) benchmark::DoNotOptimize(schott_statistic(x, spec));
}
BENCHMARK(BM_SchottStatisticWide)->Arg(1)->Arg(3)->Arg(5);

void BM_GroupwiseScanPairs(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const BlockSpec spec(std::vector<int>(static_cast<std::size_t>(k), 3));
    const DataMatrix x = fixture(spec, 3 * k + 15);
    for (auto _ : state) benchmark::DoNotOptimize(groupwise_scan(x, spec, 2, 0.05).size());
}
BENCHMARK(BM_GroupwiseScanPairs)->Arg(4)->Arg(8)->Arg(11);

}  // namespace
