// Serial reference kernels against their OpenMP counterparts.
//
//   ./hers_bench --benchmark_filter=Hierarchy
//   OMP_NUM_THREADS=8 ./hers_bench

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hers/affinity.hpp"
#include "hers/hierarchy.hpp"
#include "hers/lazy_greedy.hpp"

namespace {

using namespace hers;

RgbImage scene(int h, int w) {
    std::vector<float> rgb(3ull * h * w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t i = 3 * (static_cast<std::size_t>(r) * w + c);
            rgb[i + 0] = static_cast<float>(0.5 + 0.5 * std::sin(0.05 * c));
            rgb[i + 1] = static_cast<float>(0.5 + 0.5 * std::cos(0.07 * r));
            rgb[i + 2] = static_cast<float>((r / 40 + c / 40) % 2 ? 0.8 : 0.2);
        }
    }
    return RgbImage(h, w, std::move(rgb));
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_GaussianAffinity(benchmark::State& state) {
    const RgbImage img = scene(321, 481);
    const GaussianParams p = auto_sigma(img, Exec::Serial);
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_affinity(img, p, exec_of(state)));
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_GaussianAffinity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_AutoSigma(benchmark::State& state) {
    const RgbImage img = scene(321, 481);
    for (auto _ : state) benchmark::DoNotOptimize(auto_sigma(img, exec_of(state)));
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_AutoSigma)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BuildHierarchy(benchmark::State& state) {
    const RgbImage img = scene(321, 481);
    const PixelGraph g = build_graph(gaussian_affinity(img, auto_sigma(img)));
    for (auto _ : state) benchmark::DoNotOptimize(build_hierarchy(g, exec_of(state)));
    state.SetLabel(state.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_BuildHierarchy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
    const RgbImage img = scene(321, 481);
    const MergeHierarchy h = build_hierarchy(build_graph(gaussian_affinity(img, auto_sigma(img))));
    for (auto _ : state) benchmark::DoNotOptimize(extract(h, static_cast<std::uint32_t>(state.range(0))));
}
BENCHMARK(BM_Extract)->Arg(200)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_LazyGreedy(benchmark::State& state) {
    const RgbImage img = scene(96, 128);
    const PixelGraph g = build_graph(gaussian_affinity(img, auto_sigma(img)));
    for (auto _ : state) benchmark::DoNotOptimize(lazy_greedy_segment(g, static_cast<std::uint32_t>(state.range(0))));
}
BENCHMARK(BM_LazyGreedy)->Arg(200)->Arg(1200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
