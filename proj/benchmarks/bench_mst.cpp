#include <benchmark/benchmark.h>

#include "gmi/kdtree.hpp"
#include "gmi/mst.hpp"
#include "gmi/rng.hpp"

namespace {

gmi::Matrix make_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    gmi::Rng rng(seed);
    gmi::Matrix pts(n, d);
    for (auto& v : pts.data()) v = rng.normal();
    return pts;
}

void MstQuadratic(benchmark::State& state) {
    const auto pts = make_points(state.range(0), 2, 7);
    for (auto _ : state) {
        auto tree = gmi::mst_quadratic(pts);
        benchmark::DoNotOptimize(tree.total_weight);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MstQuadratic)->RangeMultiplier(2)->Range(256, 8192)->Complexity();

void MstDualTree(benchmark::State& state) {
    const auto pts = make_points(state.range(0), 2, 7);
    for (auto _ : state) {
        auto tree = gmi::mst_dualtree(pts);
        benchmark::DoNotOptimize(tree.total_weight);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MstDualTree)->RangeMultiplier(2)->Range(256, 32768)->Complexity();

void MstDualTreeHighDim(benchmark::State& state) {
    const auto pts = make_points(2000, state.range(0), 11);
    for (auto _ : state) {
        auto tree = gmi::mst_dualtree(pts);
        benchmark::DoNotOptimize(tree.total_weight);
    }
}
BENCHMARK(MstDualTreeHighDim)->DenseRange(2, 12, 2);

void KdTreeBuild(benchmark::State& state) {
    const auto pts = make_points(state.range(0), 3, 13);
    for (auto _ : state) {
        gmi::KdTree tree(pts);
        benchmark::DoNotOptimize(tree.nodes().size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(KdTreeBuild)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

}  // namespace

BENCHMARK_MAIN();
