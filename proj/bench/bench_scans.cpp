// Serial reference against OpenMP kernels for the grid scans.

#include <benchmark/benchmark.h>

#include "qng/error_model.hpp"
#include "qng/witnesses.hpp"

using namespace qng;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_BoundCurve(benchmark::State& state)
{
    const auto grid = uniform_grid(50, 0.01L);
    for (auto _ : state) {
        auto curve = make_bound_curve(SParam(-1), grid, exec_of(state));
        benchmark::DoNotOptimize(curve.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void BM_ErrorCurve(benchmark::State& state)
{
    ErrorSpec spec{100, {}, {0, -1, -2}};
    for (int i = 0; i <= 60; ++i) spec.n_avg_grid.push_back(i * Real(0.05));
    for (auto _ : state) {
        auto rows = bound_error_curve(spec, exec_of(state));
        benchmark::DoNotOptimize(rows.data());
    }
}

void BM_FockThresholds(benchmark::State& state)
{
    std::vector<StateFamily> fams;
    for (int m = 1; m <= 5; ++m) fams.push_back(FockFamily{m});
    const std::vector<Real> s_list{0, -0.5L, -1, -2};
    for (auto _ : state) {
        auto rows = threshold_scan(fams, s_list, Criterion::a, {}, exec_of(state));
        benchmark::DoNotOptimize(rows.data());
    }
}

void BM_PacWitnessCurve(benchmark::State& state)
{
    std::vector<Real> eps;
    for (int i = 0; i <= 10; ++i) eps.push_back(i / Real(10));
    WitnessOptions opts;
    opts.cutoff = 50;
    for (auto _ : state) {
        auto rows = witness_curve(PacFamily{1.5L}, {0, -1}, eps, Criterion::b, opts, exec_of(state));
        benchmark::DoNotOptimize(rows.data());
    }
}

}  // namespace

BENCHMARK(BM_BoundCurve)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErrorCurve)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FockThresholds)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PacWitnessCurve)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
