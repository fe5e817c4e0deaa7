#include <benchmark/benchmark.h>

#include "mqg/experiment.hpp"

namespace {

mqg::MultivariateSeries sample_series(std::size_t length, std::uint64_t seed) {
    mqg::MdgpSpec spec;
    spec.kind = mqg::MdgpKind::sVAR;
    spec.length = length;
    spec.seed = seed;
    return mqg::generate(spec);
}

void BM_ComputeQuantiles(benchmark::State& state) {
    const auto mts = sample_series(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mqg::compute_quantiles(mts.component(0), 50));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeQuantiles)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_MapQG(benchmark::State& state) {
    const auto mts = sample_series(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mqg::map_qg(mts.component(0), 50));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MapQG)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_MapMQG(benchmark::State& state) {
    const auto mts = sample_series(static_cast<std::size_t>(state.range(0)), 3);
    mqg::MappingConfig config;
    config.eta = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mqg::map_mqg(mts, config));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MapMQG)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_MapMHVG(benchmark::State& state) {
    const auto mts = sample_series(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mqg::map_mhvg_baseline(mts));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MapMHVG)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_FeatureVector(benchmark::State& state) {
    const auto mts = sample_series(static_cast<std::size_t>(state.range(0)), 5);
    mqg::MappingConfig config;
    config.eta = 50;
    const mqg::MqgResult mapped = mqg::map_mqg(mts, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mqg::feature_vector(mapped.net));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FeatureVector)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

} // namespace

BENCHMARK_MAIN();
