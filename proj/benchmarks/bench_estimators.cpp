#include <benchmark/benchmark.h>

#include "noisecal/noisecal.hpp"

using namespace noisecal;

namespace {

struct PsdPair {
    PsdTrace joule;
    PsdTrace rf;
    FitWindow window;
};

PsdPair paper_pair() {
    Scenario sc = paper_scenario(1);
    sc.bulkhead->contaminates_rf = false;
    auto joule = synth_psd_trace(sc, PsdKind::Joule, dbm_grid(-110.0, -75.0, 0.25), std::nullopt, Frequency::ghz(7.0));
    auto rf = synth_psd_trace(sc, PsdKind::Rf, dbm_grid(-30.0, 0.0, 0.5), Frequency::ghz(5.5), Frequency::ghz(7.0));
    const FitWindow w = select_fit_window(rf, estimate_floor_std(rf, 16), nullptr, -5.0);
    return {std::move(joule), std::move(rf), w};
}

}  // namespace

static void BM_ShiftFit(benchmark::State& state) {
    const auto pair = paper_pair();
    const ShiftFitOptions opts{static_cast<int>(state.range(0)), 1};
    for (auto _ : state) benchmark::DoNotOptimize(fit_psd_shift(pair.joule, pair.rf, pair.window, opts));
}
BENCHMARK(BM_ShiftFit)->Arg(0)->Arg(500);

static void BM_AttenuationProfile(benchmark::State& state) {
    const auto pair = paper_pair();
    std::vector<ProfileInput> inputs(16, ProfileInput{pair.joule, pair.rf, pair.window});
    const ProfileOptions opts{ShiftFitOptions{200, 1}, static_cast<unsigned>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(attenuation_profile(inputs, PowerRatio::from_db(-10.8), opts));
}
BENCHMARK(BM_AttenuationProfile)->Arg(1)->Arg(4)->UseRealTime();

static void BM_AddedNoiseEstimator(benchmark::State& state) {
    Scenario sc = paper_scenario(1);
    const IqSettings s{Frequency::ghz(5.5), PowerLevel::from_dbm(-28.0), 1e-6, static_cast<std::size_t>(state.range(0))};
    const auto rec = synth_iq(sc, s);
    const PowerLevel p_input = sc.a_line() * (sc.a_att() * s.p_sig);
    for (auto _ : state) benchmark::DoNotOptimize(added_noise_from_iq(rec, p_input));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AddedNoiseEstimator)->Arg(10000)->Arg(1000000);

static void BM_PowerLawFit(benchmark::State& state) {
    const Scenario sc = paper_scenario(1);
    const auto powers = dbm_grid(-100.0, -57.0, 1.0);
    const auto th = synth_thermometry(sc, powers, 0.01);
    std::vector<PowerTemperaturePoint> pts;
    for (std::size_t i = 0; i < powers.size(); ++i) pts.push_back({th.p_joule[i], th.temperature[i]});
    for (auto _ : state) benchmark::DoNotOptimize(fit_power_law(pts, sc.noise_source.thermal.t_bath));
}
BENCHMARK(BM_PowerLawFit);
BENCHMARK_MAIN();
