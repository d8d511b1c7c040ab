#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "noisecal/noisecal.hpp"

using namespace noisecal;

namespace {

const Frequency kDet = Frequency::ghz(7.0);
const Frequency kSig = Frequency::ghz(5.5);

Scenario clean_scenario(std::uint64_t seed = 3) {
    Scenario sc = paper_scenario(seed);
    sc.bulkhead->contaminates_rf = false;
    return sc;
}

// Joule axis covering the dissipated-power range of the RF sweep with margin.
std::vector<PowerLevel> joule_axis() { return dbm_grid(-110.0, -75.0, 0.25); }
std::vector<PowerLevel> rf_axis() { return dbm_grid(-30.0, 0.0, 0.5); }

double expected_a_total_db() {
    return -74.2 + 10.0 * std::log10(1.0 - std::pow(10.0, -1.08));
}

std::vector<PowerTemperaturePoint> law_points(double sigma_v, double alpha, double t0, double rel_noise,
                                              std::uint64_t seed) {
    RngStream rng(seed, "law");
    std::vector<PowerTemperaturePoint> pts;
    for (double p = 1e-13; p <= 2e-9; p *= 1.6) {
        double t = std::pow(p / sigma_v + std::pow(t0, alpha), 1.0 / alpha);
        if (rel_noise > 0.0) t *= 1.0 + rel_noise * rng.normal();
        pts.push_back({PowerLevel(p), Temperature(t)});
    }
    return pts;
}

}  // namespace

// --- power law -----------------------------------------------------------

TEST(PowerLawFit, NoiseFreeRecovery) {
    const auto fit = fit_power_law(law_points(9.21e-6, 6.72, 0.0604, 0.0, 0), Temperature::mk(60.4));
    EXPECT_NEAR(fit.value("sigma_v"), 9.21e-6, 1e-3 * 9.21e-6);
    EXPECT_NEAR(fit.value("alpha"), 6.72, 1e-3 * 6.72);
    EXPECT_LT(fit.residual_norm, 1e-8);
}

TEST(PowerLawFit, NoisyAlphaSpread) {
    std::vector<double> alphas;
    for (std::uint64_t s = 0; s < 100; ++s) {
        alphas.push_back(fit_power_law(law_points(9.21e-6, 6.72, 0.0604, 0.01, s), Temperature::mk(60.4)).value("alpha"));
    }
    double mean = 0.0;
    for (double a : alphas) mean += a;
    mean /= alphas.size();
    double var = 0.0;
    for (double a : alphas) var += (a - mean) * (a - mean);
    EXPECT_LE(std::sqrt(var / (alphas.size() - 1)), 0.05);
    EXPECT_NEAR(mean, 6.72, 0.05);
}

TEST(PowerLawFit, TwoPointsWithFixedExponentInterpolate) {
    const double sv = 9.21e-6, alpha = 6.72, t0 = 0.0604;
    std::vector<PowerTemperaturePoint> pts;
    for (double p : {1e-11, 1e-9}) {
        pts.push_back({PowerLevel(p), Temperature(std::pow(p / sv + std::pow(t0, alpha), 1.0 / alpha))});
    }
    PowerLawFitOptions opts;
    opts.fixed_alpha = alpha;
    const auto fit = fit_power_law(pts, Temperature(t0), opts);
    EXPECT_NEAR(fit.value("sigma_v"), sv, 1e-9 * sv);
    EXPECT_LT(fit.residual_norm, 1e-10);
}

TEST(PowerLawFit, DegenerateTemperaturesAreSingular) {
    std::vector<PowerTemperaturePoint> pts;
    for (double p : {1e-12, 1e-11, 1e-10, 1e-9}) pts.push_back({PowerLevel(p), Temperature(0.1)});
    EXPECT_THROW(fit_power_law(pts, Temperature::mk(60.4)), SingularFitError);
}

// --- exponential ---------------------------------------------------------

TEST(ExponentialFit, ExactExponentialRecovered) {
    const double tau = 1.57e-3;
    std::vector<double> t, y;
    for (int k = 0; k < 400; ++k) {
        t.push_back(k * 2.5e-5);
        y.push_back(0.0604 + 0.05 * std::exp(-t.back() / tau));
    }
    const auto fit = fit_exponential(t, y);
    EXPECT_NEAR(fit.value("tau"), tau, 1e-6 * tau);
    EXPECT_NEAR(fit.value("asymptote"), 0.0604, 1e-9);
    EXPECT_NEAR(fit.value("amplitude"), 0.05, 1e-9);
}

TEST(ExponentialFit, ConstantTraceIsUnidentifiable) {
    std::vector<double> t, y;
    for (int k = 0; k < 50; ++k) {
        t.push_back(k * 1e-5);
        y.push_back(0.07);
    }
    const auto fit = fit_exponential(t, y);
    EXPECT_NEAR(fit.value("amplitude"), 0.0, 1e-12);
    EXPECT_TRUE(std::isnan(fit.value("tau")));
    EXPECT_FALSE(fit.diagnostics.empty());
}

TEST(ExponentialFit, TooFewSamples) {
    std::vector<double> t{0, 1, 2}, y{1, 0.5, 0.25};
    EXPECT_THROW(fit_exponential(t, y), UsageError);
}

TEST(ExponentialFit, OdeCoolingNearLinearizedTau) {
    const Scenario sc = clean_scenario();
    const auto& tm = sc.noise_source.thermal;
    const auto p = power_for_temperature(tm, Temperature::mk(110.0));
    const auto tr = synth_transient(sc, p, time_grid(12e-3, 5e-6), 1e-3, 5e-3);
    const auto fit = fit_exponential(tr, TransientSegment::Cool);
    const double tau_lin = tm.linearized_time_constant(tm.t_bath.kelvin());
    EXPECT_GT(fit.value("tau"), tau_lin / 2.0);
    EXPECT_LT(fit.value("tau"), tau_lin * 2.0);
    // A single exponential cannot follow the T^alpha tail exactly, so the asymptote carries a small bias.
    EXPECT_NEAR(fit.value("asymptote"), tm.t_bath.kelvin(), 1e-2 * tm.t_bath.kelvin());
}

TEST(ExponentialFit, NoisyTraceFlagsNothingSpurious) {
    const Scenario sc = clean_scenario(4);
    const auto p = power_for_temperature(sc.noise_source.thermal, Temperature::mk(110.0));
    const auto tr = synth_transient(sc, p, time_grid(12e-3, 1e-5), 1e-3, 5e-3, 1e-3);
    const auto fit = fit_exponential(tr, TransientSegment::Heat);
    EXPECT_NEAR(fit.value("asymptote"), 0.110, 1e-3 * 0.110);
    EXPECT_GT(fit.value("tau"), 0.0);
}

// --- window selection ----------------------------------------------------

TEST(WindowSelection, PaperShapedMarkers) {
    const Scenario sc = paper_scenario(1);
    const auto axis = rf_axis();
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, axis, kSig, kDet, {false});
    const auto ref = synth_psd_trace(sc, PsdKind::RfReference, axis, kSig, kDet, {false});
    const double floor = psd_floor_std(sc, kDet);
    const auto w = select_fit_window(rf, floor, &ref);
    EXPECT_NEAR(w.p_lo_dbm, -22.5, 0.5);
    EXPECT_NEAR(w.p_hi_dbm, -15.5, 0.5);
}

TEST(WindowSelection, NoisyFloorEstimate) {
    const Scenario sc = paper_scenario(12);
    const auto axis = dbm_grid(-40.0, 0.0, 0.5);
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, axis, kSig, kDet);
    const double est = estimate_floor_std(rf, 16);
    EXPECT_NEAR(est, psd_floor_std(sc, kDet), 0.5 * psd_floor_std(sc, kDet));
}

TEST(WindowSelection, AllBelowFloorIsEmpty) {
    const Scenario sc = clean_scenario();
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, dbm_grid(-60.0, -40.0, 1.0), kSig, kDet, {false});
    EXPECT_THROW(select_fit_window(rf, psd_floor_std(sc, kDet)), EmptyWindowError);
}

TEST(WindowSelection, OverridePassesThrough) {
    const Scenario sc = clean_scenario();
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const auto w = select_fit_window(rf, psd_floor_std(sc, kDet), nullptr, -5.0);
    EXPECT_DOUBLE_EQ(w.p_hi_dbm, -5.0);
    const auto w_default = select_fit_window(rf, psd_floor_std(sc, kDet));
    EXPECT_DOUBLE_EQ(w_default.p_hi_dbm, 0.0);
}

TEST(WindowSelection, SingleOutlierDoesNotTrigger) {
    const Scenario sc = clean_scenario();
    auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const double floor = psd_floor_std(sc, kDet);
    const auto clean_w = select_fit_window(rf, floor);
    rf.added_psd[3] = 100.0 * floor;
    EXPECT_DOUBLE_EQ(select_fit_window(rf, floor).p_lo_dbm, clean_w.p_lo_dbm);
}

// --- shift fit -----------------------------------------------------------

TEST(ShiftFit, IdenticalTracesGiveZero) {
    const Scenario sc = clean_scenario();
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const auto fit = fit_psd_shift(rf, rf, {-25.0, 0.0}, {0, 0});
    EXPECT_NEAR(fit.value("a_total_db"), 0.0, 1e-6);
}

TEST(ShiftFit, NoiseFreeRoundTrip) {
    const Scenario sc = clean_scenario();
    const auto joule = synth_psd_trace(sc, PsdKind::Joule, joule_axis(), std::nullopt, kDet, {false});
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const auto fit = fit_psd_shift(joule, rf, {-22.5, -5.0}, {0, 0});
    EXPECT_NEAR(fit.value("a_total_db"), expected_a_total_db(), 0.01);
    const double a_line = a_line_from_total(PowerRatio::from_db(fit.value("a_total_db")), sc.a_att()).db();
    EXPECT_NEAR(a_line, -74.2, 0.01);
    EXPECT_EQ(*fit.metric("overlap_count"), 36.0);
}

TEST(ShiftFit, NoisyMonteCarloWithinHalfDb) {
    double sum_sq = 0.0;
    const int n = 40;
    for (int s = 0; s < n; ++s) {
        const Scenario sc = clean_scenario(500 + s);
        const auto joule = synth_psd_trace(sc, PsdKind::Joule, joule_axis(), std::nullopt, kDet);
        const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet);
        const auto fit = fit_psd_shift(joule, rf, {-22.5, -5.0}, {0, 0});
        const double a_line = a_line_from_total(PowerRatio::from_db(fit.value("a_total_db")), sc.a_att()).db();
        sum_sq += (a_line + 74.2) * (a_line + 74.2);
    }
    EXPECT_LT(std::sqrt(sum_sq / n), 0.5);
}

TEST(ShiftFit, Antisymmetric) {
    const Scenario sc = clean_scenario(9);
    const auto a = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet);
    Scenario shifted = sc;
    shifted.drive_chain = ChainSpec({AttenuatorStage(PowerRatio::from_db(-71.2), Temperature(4.0))});
    shifted.rng_seed = 10;
    const auto b = synth_psd_trace(shifted, PsdKind::Rf, rf_axis(), kSig, kDet);
    const FitWindow full{-20.0, 0.0};
    const double ab = fit_psd_shift(a, b, full, {0, 0}).value("a_total_db");
    const double ba = fit_psd_shift(b, a, full, {0, 0}).value("a_total_db");
    EXPECT_NEAR(ab, 3.0, 0.3);
    EXPECT_NEAR(ab, -ba, 0.1);
}

TEST(ShiftFit, BootstrapErrorIsReasonable) {
    const Scenario sc = clean_scenario(31);
    const auto joule = synth_psd_trace(sc, PsdKind::Joule, joule_axis(), std::nullopt, kDet);
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet);
    const auto fit = fit_psd_shift(joule, rf, {-22.5, -5.0}, {200, 1});
    EXPECT_GT(fit.error("a_total_db"), 0.0);
    EXPECT_LT(fit.error("a_total_db"), 0.5);
    const auto again = fit_psd_shift(joule, rf, {-22.5, -5.0}, {200, 1});
    EXPECT_EQ(fit.error("a_total_db"), again.error("a_total_db"));
}

TEST(ShiftFit, Errors) {
    const Scenario sc = clean_scenario();
    const auto joule = synth_psd_trace(sc, PsdKind::Joule, joule_axis(), std::nullopt, kDet, {false});
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const auto rf_other = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, Frequency::ghz(6.0), {false});
    EXPECT_THROW(fit_psd_shift(joule, rf_other, {-22.5, -5.0}), UsageError);
    EXPECT_THROW(fit_psd_shift(joule, rf, {-10.0, -9.6}), InsufficientOverlapError);
    const auto joule_short = synth_psd_trace(sc, PsdKind::Joule, dbm_grid(-110.0, -109.75, 0.25), std::nullopt, kDet,
                                             {false});
    EXPECT_THROW(fit_psd_shift(joule_short, rf, {-22.5, -5.0}), InsufficientOverlapError);
}

// --- attenuation arithmetic ---------------------------------------------

TEST(ALineFromTotal, Arithmetic) {
    EXPECT_NEAR(a_line_from_total(PowerRatio(0.5), PowerRatio(1e-15)).linear(), 0.5, 1e-12);
    EXPECT_NEAR(a_line_from_total(PowerRatio::from_db(-74.6), PowerRatio::from_db(-10.8)).db(), -74.2, 0.05);
    EXPECT_NEAR(a_line_from_total(PowerRatio::from_db(-74.6), PowerRatio::from_db(-10.8)).db(), -74.22285794804909,
                1e-10);
    EXPECT_THROW(a_line_from_total(PowerRatio(0.5), PowerRatio(1.0)), DomainError);
}

TEST(ALineFromTotal, RoundTripWithDissipatedPower) {
    const auto a_line = PowerRatio::from_db(-63.0);
    const auto a_att = PowerRatio::from_db(-6.0);
    const auto p = PowerLevel::from_dbm(-10.0);
    const auto total = PowerRatio(dissipated_rf_power(a_line, a_att, p).watts() / p.watts());
    EXPECT_NEAR(a_line_from_total(total, a_att).db(), -63.0, 1e-12);
}

TEST(Contamination, Arithmetic) {
    const auto a_att = PowerRatio::from_db(-10.8);
    const double f = contamination_fraction(1.0, 0.34, a_att);
    EXPECT_NEAR(f, 0.028279968217490814, 1e-15);
    EXPECT_NEAR(f, 0.028, 0.002);
    EXPECT_EQ(contamination_fraction(1.0, 0.0, a_att), 0.0);
    EXPECT_EQ(contamination_fraction(2.0, 2.0, PowerRatio(1.0)), 1.0);
    EXPECT_THROW(contamination_fraction(0.0, 1.0, a_att), DomainError);
}

TEST(Contamination, PresetTracesAtMinusFiveDbm) {
    const Scenario sc = paper_scenario(1);
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, rf_axis(), kSig, kDet, {false});
    const auto ref = synth_psd_trace(sc, PsdKind::RfReference, rf_axis(), kSig, kDet, {false});
    const double f = contamination_fraction(rf, ref, sc.a_att(), PowerLevel::from_dbm(-5.0));
    EXPECT_NEAR(f, 0.028, 0.005);
}

// --- profile -------------------------------------------------------------

namespace {

std::vector<ProfileInput> flat_profile_inputs(std::uint64_t seed, bool noise, const std::vector<double>& f_sig_ghz,
                                              const std::vector<double>& f_det_ghz) {
    std::vector<ProfileInput> out;
    for (double fs : f_sig_ghz) {
        for (double fd : f_det_ghz) {
            const Scenario sc = clean_scenario(seed);
            const Frequency det = Frequency::ghz(fd);
            out.push_back({synth_psd_trace(sc, PsdKind::Joule, joule_axis(), std::nullopt, det, {noise}),
                           synth_psd_trace(sc, PsdKind::Rf, rf_axis(), Frequency::ghz(fs), det, {noise}),
                           FitWindow{-22.5, -5.0}});
        }
    }
    return out;
}

}  // namespace

TEST(AttenuationProfile, FlatProfileRecovered) {
    const auto inputs = flat_profile_inputs(1, false, {4.0, 5.0, 6.0, 7.0, 8.0}, {7.0});
    const auto prof = attenuation_profile(inputs, clean_scenario().a_att(), {{0, 0}, 1});
    ASSERT_EQ(prof.size(), 5u);
    for (const auto& e : prof) {
        EXPECT_FALSE(e.error.has_value());
        EXPECT_NEAR(e.a_line_db, -74.2, 0.5);
        EXPECT_FALSE(e.discrepancy_db.has_value());
    }
}

TEST(AttenuationProfile, NoiseFreeDiscrepancyIsZero) {
    const auto inputs = flat_profile_inputs(1, false, {5.0, 6.0}, {6.5, 7.0, 7.5});
    const auto prof = attenuation_profile(inputs, clean_scenario().a_att(), {{0, 0}, 2});
    for (const auto& e : prof) {
        ASSERT_TRUE(e.discrepancy_db.has_value());
        EXPECT_LT(*e.discrepancy_db, 0.01);
    }
}

TEST(AttenuationProfile, TwoBandsAgreeWithinOneDb) {
    int agree = 0;
    const int n = 40;
    for (int s = 0; s < n; ++s) {
        const auto inputs = flat_profile_inputs(700 + s, true, {5.5}, {6.5, 7.0});
        const auto prof = attenuation_profile(inputs, clean_scenario().a_att(), {{0, 0}, 1});
        if (prof[0].discrepancy_db && *prof[0].discrepancy_db < 1.0) ++agree;
    }
    EXPECT_GE(agree, static_cast<int>(0.95 * n));
}

TEST(AttenuationProfile, SingleEntryAndFailureFlag) {
    auto inputs = flat_profile_inputs(1, false, {5.5}, {7.0});
    EXPECT_EQ(attenuation_profile(inputs, clean_scenario().a_att()).size(), 1u);
    auto bad = inputs.front();
    bad.window = {-10.0, -9.9};
    inputs.push_back(bad);
    const auto prof = attenuation_profile(inputs, clean_scenario().a_att(), {{0, 0}, 2});
    ASSERT_EQ(prof.size(), 2u);
    EXPECT_FALSE(prof[0].error.has_value());
    EXPECT_TRUE(prof[1].error.has_value());
}

TEST(AttenuationProfile, ParallelMatchesSerial) {
    const auto inputs = flat_profile_inputs(5, true, {4.0, 5.0, 6.0}, {6.5, 7.0});
    const auto serial = attenuation_profile(inputs, clean_scenario().a_att(), {{50, 3}, 1});
    const auto parallel = attenuation_profile(inputs, clean_scenario().a_att(), {{50, 3}, 4});
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].a_line_db, parallel[i].a_line_db);
        EXPECT_EQ(serial[i].a_line_err_db, parallel[i].a_line_err_db);
    }
}

// --- IQ ------------------------------------------------------------------

namespace {

IqRecord paper_iq(std::uint64_t seed, std::size_t n) {
    const Scenario sc = clean_scenario(seed);
    return synth_iq(sc, IqSettings{kSig, PowerLevel::from_dbm(-28.0), 1e-6, n, 1.0});
}

PowerLevel paper_p_input() {
    const Scenario sc = clean_scenario();
    return sc.a_line() * (sc.a_att() * PowerLevel::from_dbm(-28.0));
}

}  // namespace

TEST(AddedNoise, QuantumLimitRecord) {
    Scenario sc = clean_scenario(2);
    sc.readout_added_photons = 0.0;
    const double t_int = 1e-6;
    const double p_input = 50.0 * constants::planck * kSig.hz() / t_int;
    const auto p_sig = PowerLevel(p_input / (sc.a_line().linear() * sc.a_att().linear()));
    const auto rec = synth_iq(sc, IqSettings{kSig, p_sig, t_int, 100000, 1.0});
    const auto fit = added_noise_from_iq(rec, PowerLevel(p_input));
    EXPECT_NEAR(fit.value("n_add"), 0.0, 3.0 * fit.error("n_add"));
    EXPECT_NEAR(*fit.metric("snr"), 10.0, 0.1);
}

TEST(AddedNoise, MillionSampleRoundTrip) {
    const auto fit = added_noise_from_iq(paper_iq(1, 1000000), paper_p_input());
    EXPECT_NEAR(fit.value("n_add"), 23.6, 0.02 * 23.6);
    EXPECT_GT(fit.error("n_add"), 0.0);
}

TEST(AddedNoise, ScaleInvariance) {
    const auto rec = paper_iq(4, 5000);
    auto scaled = rec;
    for (auto& s : scaled.samples) {
        s.i *= 3.7;
        s.q *= 3.7;
    }
    const auto a = added_noise_from_iq(rec, paper_p_input());
    const auto b = added_noise_from_iq(scaled, paper_p_input());
    EXPECT_NEAR(a.value("n_add"), b.value("n_add"), 1e-9 * std::abs(a.value("n_add")));
}

TEST(AddedNoise, RotationInvariance) {
    const auto rec = paper_iq(6, 5000);
    const auto base = added_noise_from_iq(rec, paper_p_input());
    for (double phi : {0.3, 1.7, std::numbers::pi, 5.0}) {
        auto rot = rec;
        const double c = std::cos(phi), s = std::sin(phi);
        for (auto& x : rot.samples) x = {c * x.i - s * x.q, s * x.i + c * x.q};
        const auto r = added_noise_from_iq(rot, paper_p_input());
        EXPECT_NEAR(r.value("n_add"), base.value("n_add"), 1e-9 * std::abs(base.value("n_add")));
        EXPECT_NEAR(r.value("mu"), base.value("mu"), 1e-9 * base.value("mu"));
        EXPECT_NEAR(r.value("sigma"), base.value("sigma"), 1e-9 * base.value("sigma"));
    }
}

TEST(AddedNoise, DegenerateAndInconsistent) {
    IqRecord flat{std::vector<IqSample>(200, IqSample{1.0, 1.0}), 1e-6, kSig, PowerLevel(1e-12), 1.0, {}};
    EXPECT_THROW(added_noise_from_iq(flat, PowerLevel(1e-18)), DomainError);

    const auto rec = paper_iq(8, 20000);
    const auto fit = added_noise_from_iq(rec, PowerLevel(paper_p_input().watts() / 1000.0));
    EXPECT_LT(fit.value("n_add"), -0.4);
    const bool flagged = std::any_of(fit.diagnostics.begin(), fit.diagnostics.end(),
                                     [](const std::string& d) { return d.find("quantum limit") != std::string::npos; });
    EXPECT_TRUE(flagged);
}

TEST(Gain, Arithmetic) {
    EXPECT_NEAR(gain_estimate(PowerLevel(1e-9), PowerLevel(1e-9)).db(), 0.0, 1e-12);
    EXPECT_NEAR(gain_estimate(PowerLevel::from_dbm(-44.9), PowerLevel::from_dbm(-115.1)).db(), 70.2, 1e-9);
    const auto g = gain_with_uncertainty(PowerLevel::from_dbm(-44.9), PowerLevel::from_dbm(-115.1), 0.5);
    EXPECT_NEAR(g.value, 70.2, 1e-9);
    EXPECT_NEAR(g.error, 0.5, 1e-12);
}

TEST(Gain, FromIqRecord) {
    const auto rec = paper_iq(3, 100000);
    const auto fit = added_noise_from_iq(rec, paper_p_input());
    const auto out = output_tone_power(rec, fit.value("mu"));
    EXPECT_NEAR(gain_estimate(out, paper_p_input()).db(), 70.2, 0.05);
}

TEST(Thermometer, SiAngularOracle) {
    const Frequency f_ge(5.496e9);
    const double gamma = 2.0 * std::numbers::pi * 35.8e6;
    const auto p = PowerLevel::from_dbm(-8.4);
    const auto a = thermometer_attenuation(f_ge, gamma, p);
    // hbar * 2 pi * 5.496 GHz * 2 pi * 35.8 MHz / (8 * 10^-0.84 mW), evaluated at 40 digits.
    EXPECT_NEAR(a.linear(), 7.083952843182753e-13, 1e-24);
    EXPECT_NEAR(a.db(), -121.49724338505915, 1e-9);
}

TEST(Thermometer, ScalingLaws) {
    const Frequency f_ge(5.496e9);
    const double gamma = 2.0 * std::numbers::pi * 35.8e6;
    for (auto conv : {ThermometerConvention::SiAngular, ThermometerConvention::CyclicLinewidth,
                      ThermometerConvention::PlanckCyclic}) {
        const double a1 = thermometer_attenuation(f_ge, gamma, PowerLevel(1e-6), conv).linear();
        const double a2 = thermometer_attenuation(f_ge, gamma, PowerLevel(0.5e-6), conv).linear();
        EXPECT_NEAR(a2 / a1, 2.0, 1e-12);
    }
    const double omega = gamma / std::sqrt(2.0);
    const double base = thermometer_attenuation_from_drive(f_ge, gamma, omega, PowerLevel(1e-6)).linear();
    EXPECT_NEAR(thermometer_attenuation_from_drive(f_ge, gamma, omega * std::sqrt(3.0), PowerLevel(3e-6)).linear(),
                base, 1e-12 * base);
    EXPECT_NEAR(base, thermometer_attenuation(f_ge, gamma, PowerLevel(1e-6)).linear(), 1e-12 * base);
}

TEST(Thermometer, ConventionNames) {
    for (auto conv : {ThermometerConvention::SiAngular, ThermometerConvention::CyclicLinewidth,
                      ThermometerConvention::PlanckCyclic}) {
        EXPECT_EQ(thermometer_convention_from_string(to_string(conv)), conv);
    }
    EXPECT_THROW(thermometer_convention_from_string("furlongs"), UsageError);
}
