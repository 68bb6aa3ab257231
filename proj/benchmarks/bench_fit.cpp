#include <benchmark/benchmark.h>

#include <vector>

#include "tridge/cv.hpp"
#include "tridge/ridge.hpp"
#include "tridge/sim.hpp"
#include "tridge/tridge.hpp"

namespace {

tridge::Dataset instance(tridge::Family family, Eigen::Index n, Eigen::Index p) {
    tridge::SimConfig c;
    c.family = family;
    c.n = n;
    c.p = p;
    c.seed = 1;
    return tridge::generate_instance(c, 0).data;
}

std::vector<double> grid(double lo, double hi, int m) {
    std::vector<double> g;
    for (int i = 1; i <= m; ++i) g.push_back(lo + (hi - lo) * i / m);
    return g;
}

void BM_RidgePath(benchmark::State& state, tridge::Family family) {
    const tridge::Dataset d = instance(family, state.range(0), state.range(1));
    const std::vector<double> rs = grid(0.5, 0.7, 1000);
    for (auto _ : state) benchmark::DoNotOptimize(tridge::ridge_path(family, d, rs));
    state.SetItemsProcessed(state.iterations() * std::int64_t(rs.size()));
}

void BM_TridgeFit(benchmark::State& state, tridge::Family family) {
    const tridge::Dataset d = instance(family, state.range(0), state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(tridge::tridge_fit(family, d));
}

void BM_Cv5(benchmark::State& state, tridge::Family family) {
    const tridge::Dataset d = instance(family, state.range(0), state.range(1));
    tridge::CvConfig config;
    for (auto _ : state) benchmark::DoNotOptimize(tridge::kfold_cv_ridge(family, d, config));
}

} // namespace

BENCHMARK_CAPTURE(BM_RidgePath, gaussian, tridge::Family::gaussian)
    ->Args({100, 300})->Args({200, 500})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RidgePath, poisson, tridge::Family::poisson)
    ->Args({100, 300})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TridgeFit, gaussian, tridge::Family::gaussian)
    ->Args({100, 300})->Args({50, 1000})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TridgeFit, poisson, tridge::Family::poisson)
    ->Args({100, 300})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TridgeFit, bernoulli, tridge::Family::bernoulli)
    ->Args({100, 300})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Cv5, gaussian, tridge::Family::gaussian)
    ->Args({100, 300})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
