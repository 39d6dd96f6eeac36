#include "graev/graev_metric.hpp"
#include "graev/ground_space.hpp"
#include "graev/neighborhood.hpp"
#include "graev/rng.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <vector>

namespace {

graev::GroundSpace plane(std::size_t points, std::uint64_t seed) {
    graev::CounterRng rng(seed, 0);
    std::vector<std::vector<double>> coords(points, std::vector<double>(2, 0.0));
    for (std::size_t i = 1; i < points; ++i) {
        coords[i] = {rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    }
    return graev::GroundSpace::from_coords(std::move(coords));
}

graev::GroupElement full_support(std::size_t size) {
    std::vector<graev::PointIndex> support(size);
    std::iota(support.begin(), support.end(), graev::PointIndex{1});
    return graev::GroupElement::from_support(std::move(support));
}

void BM_GraevNorm(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto space = plane(k + 1, 7);
    const auto h = full_support(k);
    for (auto _ : state) benchmark::DoNotOptimize(graev::graev_norm(h, space).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GraevNorm)->DenseRange(2, 20, 2)->Unit(benchmark::kMicrosecond);

void BM_OracleTable(benchmark::State& state) {
    const auto points = static_cast<std::size_t>(state.range(0));
    const auto space = plane(points, 11);
    for (auto _ : state) benchmark::DoNotOptimize(graev::oracle_table(space, points / 2 + 1).data());
}
BENCHMARK(BM_OracleTable)->DenseRange(3, 8)->Unit(benchmark::kMicrosecond);

void BM_CombineSup(benchmark::State& state) {
    const auto length = static_cast<std::size_t>(state.range(0));
    const auto base = plane(8, 3);
    std::vector<graev::GroundSpace> metrics;
    std::vector<std::vector<double>> d(8, std::vector<double>(8));
    for (std::size_t n = 1; n <= length; ++n) {
        for (graev::PointIndex i = 0; i < 8; ++i) {
            for (graev::PointIndex j = 0; j < 8; ++j) d[i][j] = base.distance(i, j) / static_cast<double>(n);
        }
        metrics.push_back(graev::GroundSpace::from_matrix(d));
    }
    const graev::PseudometricSequence seq(std::move(metrics), graev::TailRule::scale(0.5));
    for (auto _ : state) benchmark::DoNotOptimize(graev::combine_sup(seq).size());
}
BENCHMARK(BM_CombineSup)->RangeMultiplier(4)->Range(1, 64)->Unit(benchmark::kMicrosecond);

void BM_WdMembership(benchmark::State& state) {
    const auto n_max = static_cast<std::size_t>(state.range(0));
    const auto base = plane(8, 5);
    const std::vector<double> scales{2.0, 1.0, 0.5, 0.25};
    const graev::WdSystem system(graev::PseudometricSequence::scaled(base, scales, graev::TailRule::scale(0.5)));
    const auto space = graev::combine_sup(system.sequence());
    const auto g = full_support(6);
    for (auto _ : state) benchmark::DoNotOptimize(graev::wd_membership(g, system, space, n_max).verdict);
}
BENCHMARK(BM_WdMembership)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
