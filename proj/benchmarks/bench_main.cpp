#include <benchmark/benchmark.h>

#include "botsim/engine.hpp"
#include "botsim/experiments.hpp"
#include "botsim/network.hpp"
#include "botsim/stats/distributions.hpp"
#include "botsim/stats/power.hpp"

namespace {

void BM_GenerateSmallWorld(benchmark::State& state) {
    const botsim::SmallWorldSpec spec{.n = static_cast<std::size_t>(state.range(0)), .k = 10, .beta = 0.05};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        botsim::Rng rng(seed++);
        benchmark::DoNotOptimize(botsim::generate_small_world(spec, rng));
    }
}
BENCHMARK(BM_GenerateSmallWorld)->Arg(1200)->Arg(3000);

void BM_EngineStep(benchmark::State& state) {
    botsim::SimParams p;
    p.alpha2 = static_cast<double>(state.range(0)) / 10.0;
    p.max_ticks = 1'000'000;
    botsim::Simulation sim(p);
    for (auto _ : state) benchmark::DoNotOptimize(sim.step());
}
BENCHMARK(BM_EngineStep)->Arg(0)->Arg(10);

void BM_BaselineRun(benchmark::State& state) {
    botsim::SimParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(botsim::run_simulation(p));
        ++p.seed;
    }
}
BENCHMARK(BM_BaselineRun)->Unit(benchmark::kMillisecond);

void BM_SweepE1(benchmark::State& state) {
    const auto spec = botsim::build_experiment(botsim::ExperimentId::E1, {}, 2, 1);
    for (auto _ : state) benchmark::DoNotOptimize(botsim::run_sweep(spec, 1));
}
BENCHMARK(BM_SweepE1)->Unit(benchmark::kMillisecond);

void BM_IncompleteBeta(benchmark::State& state) {
    double x = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(botsim::stats::regularized_beta(4.5, 27.0, x));
        x = x < 0.99 ? x + 0.01 : 0.01;
    }
}
BENCHMARK(BM_IncompleteBeta);

void BM_NoncentralF(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(botsim::stats::noncentral_f_cdf(2.1, 9, 10, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_NoncentralF)->Arg(5)->Arg(500);

void BM_RequiredN(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(botsim::stats::anova_power_required_n({2.39, 3, 0.05, 0.8}));
}
BENCHMARK(BM_RequiredN);

}  // namespace

BENCHMARK_MAIN();
