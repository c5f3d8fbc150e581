// Microbenchmarks for the hot paths: the three exact solvers (all dominated
// by the shared sweep), summation, and the group pipeline that the Monte
// Carlo harness drives millions of times.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "cubedac/dac.hpp"
#include "cubedac/estimators.hpp"
#include "cubedac/mathutil.hpp"
#include "cubedac/simgen.hpp"

namespace {

using namespace cubedac;

void BM_LocationSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    LocationStream stream(11);
    std::vector<double> xs(n);
    for (double& v : xs) v = stream.next();
    for (auto _ : state) {
        const SweepResult r = location_sweep(xs);
        benchmark::DoNotOptimize(r.max_value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LocationSweep)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)
    ->Complexity(benchmark::oNLogN);

void BM_MaxscoreSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    MaxscoreStream stream(13);
    std::vector<double> x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) stream.next(x1[i], x2[i], y[i]);
    for (auto _ : state) {
        const SweepResult r = maxscore_angle_sweep(x1, x2, y);
        benchmark::DoNotOptimize(r.max_value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaxscoreSweep)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)
    ->Complexity(benchmark::oNLogN);

void BM_ValuesearchSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ValuesearchStream stream(17);
    std::vector<double> x(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const TreatmentSample s = stream.next();
        x[i] = s.x;
        c[i] = valuesearch_contrast(s).c;
    }
    for (auto _ : state) {
        const SweepResult r = valuesearch_sweep(x, c, kDefaultValueBounds);
        benchmark::DoNotOptimize(r.max_value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ValuesearchSweep)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)
    ->Complexity(benchmark::oNLogN);

// Cost of exactness: the expansion-based sum against plain pairwise.
void BM_ExactSum(benchmark::State& state) {
    LocationStream stream(19);
    std::vector<double> xs(1 << 16);
    for (double& v : xs) v = stream.next();
    for (auto _ : state) benchmark::DoNotOptimize(exact_sum(xs));
}
BENCHMARK(BM_ExactSum);

void BM_PairwiseSum(benchmark::State& state) {
    LocationStream stream(19);
    std::vector<double> xs(1 << 16);
    for (double& v : xs) v = stream.next();
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_sum(xs));
}
BENCHMARK(BM_PairwiseSum);

// One full replication: generate, split into S groups, solve each, aggregate.
void BM_RunGroupsLocation(benchmark::State& state) {
    const int S = static_cast<int>(state.range(0));
    RunOptions opt;
    opt.threads = 1;
    std::uint64_t rep = 0;
    for (auto _ : state) {
        const std::vector<GroupEstimate> groups =
            run_groups(ExampleKind::location, 23, rep++, S, 512, opt);
        benchmark::DoNotOptimize(aggregate(groups)[0]);
    }
}
BENCHMARK(BM_RunGroupsLocation)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
