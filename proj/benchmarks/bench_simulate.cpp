// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "derw/normalizers.hpp"
#include "derw/rng.hpp"
#include "derw/simulate.hpp"
#include "derw/stats.hpp"

namespace {

using namespace derw;

const ModelParams kStrong{0.9, 0.5, ConstantSeq{0.8}, ConstantSeq{0.7}};

void BM_PhiloxUniform(benchmark::State& state) {
    const StreamRng rng(12345, 0);
    std::uint64_t step = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.uniform(step++, 0));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

void BM_SimulateStateOnly(benchmark::State& state) {
    const auto n_max = state.range(0);
    const auto norm = compute_normalizers(kStrong, n_max);
    const std::vector<std::int64_t> cps{n_max};
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_path(kStrong, norm, n_max, cps, 7, path++, SimBackend::state_only));
    }
    state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_SimulateStateOnly)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_SimulateMemorySampling(benchmark::State& state) {
    const auto n_max = state.range(0);
    const auto norm = compute_normalizers(kStrong, n_max);
    const std::vector<std::int64_t> cps{n_max};
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_path(kStrong, norm, n_max, cps, 7, path++, SimBackend::memory_sampling));
    }
    state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_SimulateMemorySampling)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_ComputeNormalizers(benchmark::State& state) {
    const auto n_max = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_normalizers(kStrong, n_max));
    }
    state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_ComputeNormalizers)->Arg(1 << 14)->Arg(1 << 20);

void BM_ExactDistribution(benchmark::State& state) {
    const auto n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_distribution(kStrong, n));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ExactDistribution)->Arg(64)->Arg(256)->Arg(1024)->Complexity(benchmark::oNSquared);

void BM_KsTestNormal(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    std::vector<double> samples(count);
    const StreamRng rng(9, 1);
    for (std::size_t i = 0; i < count; ++i)
        samples[i] = rng.uniform(i, 0) + rng.uniform(i, 1) - 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks_test_normal(samples));
    }
}
BENCHMARK(BM_KsTestNormal)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
