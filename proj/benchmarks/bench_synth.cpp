#include <benchmark/benchmark.h>

#include "noisecal/noisecal.hpp"

using namespace noisecal;

static void BM_TransientIntegration(benchmark::State& state) {
    const Scenario sc = paper_scenario(1);
    const auto& tm = sc.noise_source.thermal;
    const auto p = power_for_temperature(tm, Temperature::mk(110.0));
    const auto grid = time_grid(12e-3, 12e-3 / static_cast<double>(state.range(0)));
    const auto schedule = PowerSchedule::pulse(p, 1e-3, 5e-3);
    for (auto _ : state) benchmark::DoNotOptimize(transient_temperature(tm, schedule, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TransientIntegration)->Arg(600)->Arg(2400)->Arg(24000);

static void BM_PsdTrace(benchmark::State& state) {
    const Scenario sc = paper_scenario(1);
    const auto axis = dbm_grid(-30.0, 0.0, 30.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synth_psd_trace(sc, PsdKind::Rf, axis, Frequency::ghz(5.5), Frequency::ghz(7.0)));
    }
}
BENCHMARK(BM_PsdTrace)->Arg(60)->Arg(600);

static void BM_IqSynthesis(benchmark::State& state) {
    const Scenario sc = paper_scenario(1);
    const IqSettings s{Frequency::ghz(5.5), PowerLevel::from_dbm(-28.0), 1e-6, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(synth_iq(sc, s));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IqSynthesis)->Arg(10000)->Arg(1000000);
