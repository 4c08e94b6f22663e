#include <benchmark/benchmark.h>

#include <random>

#include "ncc/classifiers.hpp"
#include "ncc/simulation.hpp"

namespace {

using namespace ncc;

ExperimentConfig bench_config(ExperimentId id) {
    ExperimentConfig cfg;
    cfg.experiment = id;
    cfg.test_per_class = 1000;
    return cfg;
}

Dataset training(std::size_t p, std::size_t n) {
    return make_training_set(bench_config(ExperimentId::Exp2), p, n, 0);
}

void BM_ConvexHull(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
    for (auto& p : pts) p = {g(rng), g(rng)};
    for (auto _ : state) benchmark::DoNotOptimize(convex_hull_2d(pts));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexHull)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_BuildCavities(benchmark::State& state) {
    const Dataset d = training(static_cast<std::size_t>(state.range(0)), 200);
    const auto mode = static_cast<SurfaceMode>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_cavities(d, mode, ClassId::Omega1, 8));
}
BENCHMARK(BM_BuildCavities)->ArgsProduct({{2, 16}, {0, 1, 2}});

void BM_NccPredict(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const NccModel m = fit_ncc(training(p, 200));
    const Dataset test = make_test_set(bench_config(ExperimentId::Exp2), p);
    for (auto _ : state) benchmark::DoNotOptimize(error_rate(m, test));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(test.size()));
}
BENCHMARK(BM_NccPredict)->Arg(2)->Arg(16);

void BM_LdaFit(benchmark::State& state) {
    const Dataset d = training(static_cast<std::size_t>(state.range(0)), 200);
    for (auto _ : state) benchmark::DoNotOptimize(fit_lda(d));
}
BENCHMARK(BM_LdaFit)->Arg(2)->Arg(16);

void BM_RunTrial(benchmark::State& state) {
    const auto cfg = bench_config(ExperimentId::Exp2);
    const auto p = static_cast<std::size_t>(state.range(0));
    const Dataset test = make_test_set(cfg, p);
    std::size_t trial = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg, p, 200, trial++, test));
}
BENCHMARK(BM_RunTrial)->Arg(2)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
