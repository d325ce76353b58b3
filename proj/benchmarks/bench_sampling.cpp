// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "blockcorr/freeness.hpp"
#include "blockcorr/sampling.hpp"

using namespace blockcorr;

namespace {

void BM_HaarOrthogonal(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t r = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(haar_orthogonal(n, RngStream{2, r++})(0, 0));
    state.SetComplexityN(n);
}
BENCHMARK(BM_HaarOrthogonal)->Arg(8)->Arg(49)->Arg(149)->Complexity();

void BM_GaussianSampleDense(benchmark::State& state) {
    const int scale = static_cast<int>(state.range(0));
    const BlockSpec spec({10 * scale, 10 * scale, 15 * scale});
    const Population pop = scenario_population(Scenario::III, spec, RngStream{3, 0});
    std::uint64_t r = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gaussian_sample(pop, 100, RngStream{3, r++})(0, 0));
}
BENCHMARK(BM_GaussianSampleDense)->Arg(1)->Arg(3)->Arg(5);

void BM_ProjectionSum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ProjectionSumModel model{n, {n / 5, n / 5, 3 * n / 10}};
    std::uint64_t r = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_projection_sum(model, RngStream{4, r++}).sum());
}
BENCHMARK(BM_ProjectionSum)->Arg(50)->Arg(100)->Arg(200);

}  // namespace
