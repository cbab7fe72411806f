#include <benchmark/benchmark.h>

#include "gmi/baselines.hpp"
#include "gmi/divergence.hpp"
#include "gmi/fr.hpp"
#include "gmi/samples.hpp"

namespace {

void FrEstimate(benchmark::State& state) {
    const auto data =
        gmi::generate_gaussian({4, 0.0, static_cast<std::size_t>(state.range(0)), 3});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto e = gmi::estimate_gmi(data, {0.5, seed++, gmi::ShuffleMode::Permutation});
        benchmark::DoNotOptimize(e.value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(FrEstimate)->RangeMultiplier(2)->Range(512, 16384)->Complexity()
    ->Unit(benchmark::kMillisecond);

void KdePlugin(benchmark::State& state) {
    const auto data =
        gmi::generate_gaussian({4, 0.0, static_cast<std::size_t>(state.range(0)), 3});
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmi::kde_gmi(data, 0.5));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(KdePlugin)->RangeMultiplier(2)->Range(512, 8192)->Complexity()
    ->Unit(benchmark::kMillisecond);

void McTruth(benchmark::State& state) {
    gmi::TruthOracle oracle{{2, 0.5, 2, 0}, 0.5, static_cast<std::size_t>(state.range(0)), 5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmi::mc_true_gmi(oracle).value);
    }
}
BENCHMARK(McTruth)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void DiscreteGmiGrid(benchmark::State& state) {
    const std::size_t cells = state.range(0);
    gmi::Matrix grid(cells, cells);
    const double step = 10.0 / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i)
        for (std::size_t j = 0; j < cells; ++j) {
            const double x = -5.0 + (i + 0.5) * step;
            const double y = -5.0 + (j + 0.5) * step;
            grid(i, j) = std::exp(-(x * x - x * y + y * y) / 1.5);
        }
    const auto joint = gmi::DiscreteJoint::normalized(std::move(grid));
    const gmi::HpParams params(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gmi::gmi(joint, params));
    }
}
BENCHMARK(DiscreteGmiGrid)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
