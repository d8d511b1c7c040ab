#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "noisecal/noisecal.hpp"

using namespace noisecal;

namespace {

Scenario clean_scenario(std::uint64_t seed = 3) {
    Scenario sc = paper_scenario(seed);
    sc.bulkhead->contaminates_rf = false;
    return sc;
}

const Frequency kDet = Frequency::ghz(7.0);
const Frequency kSig = Frequency::ghz(5.5);

}  // namespace

TEST(SynthPsd, NoiseFreeJouleMatchesClosedForm) {
    const Scenario sc = clean_scenario();
    const auto axis = dbm_grid(-110.0, -80.0, 1.0);
    const auto trace = synth_psd_trace(sc, PsdKind::Joule, axis, std::nullopt, kDet, {false});
    ASSERT_EQ(trace.added_psd.size(), axis.size());
    const double a_att = sc.a_att().linear();
    const double quantum = sc.readout_gain.linear() * constants::planck * kDet.hz();
    const auto& tm = sc.noise_source.thermal;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const auto t_e = steady_state_temperature(tm, axis[i]);
        const double dn = (1.0 - a_att) * (bose_einstein(t_e, kDet).photons() - bose_einstein(tm.t_bath, kDet).photons());
        EXPECT_NEAR(trace.added_psd[i], quantum * dn, 1e-12 * quantum * dn);
    }
    EXPECT_FALSE(trace.f_sig.has_value());
}

TEST(SynthPsd, RfOverlaysJouleInDissipatedPower) {
    const Scenario sc = clean_scenario();
    const auto p_sig = dbm_grid(-30.0, 0.0, 0.5);
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, p_sig, kSig, kDet, {false});
    std::vector<PowerLevel> dissipated;
    for (const auto& p : p_sig) dissipated.push_back(dissipated_rf_power(sc.a_line(), sc.a_att(), p));
    const auto joule = synth_psd_trace(sc, PsdKind::Joule, dissipated, std::nullopt, kDet, {false});
    for (std::size_t i = 0; i < p_sig.size(); ++i) {
        ASSERT_GT(joule.added_psd[i], 0.0);
        EXPECT_LT(std::abs(rf.added_psd[i] - joule.added_psd[i]), 1e-12 * joule.added_psd[i]);
    }
}

TEST(SynthPsd, EquivalenceHoldsForRandomScenarios) {
    RngStream rng(5, "equivalence");
    for (int trial = 0; trial < 20; ++trial) {
        Scenario sc = clean_scenario();
        sc.drive_chain = ChainSpec({AttenuatorStage(PowerRatio::from_db(-40.0 - 40.0 * rng.uniform()), Temperature(4.0))});
        sc.noise_source.pad = tpad_from_attenuation(-3.0 - 17.0 * rng.uniform());
        const Frequency f_det(4e9 + 4e9 * rng.uniform());
        const auto p_sig = dbm_grid(-30.0, 0.0, 2.0);
        const auto rf = synth_psd_trace(sc, PsdKind::Rf, p_sig, kSig, f_det, {false});
        std::vector<PowerLevel> dissipated;
        for (const auto& p : p_sig) dissipated.push_back(dissipated_rf_power(sc.a_line(), sc.a_att(), p));
        const auto joule = synth_psd_trace(sc, PsdKind::Joule, dissipated, std::nullopt, f_det, {false});
        for (std::size_t i = 0; i < p_sig.size(); ++i) {
            EXPECT_LE(std::abs(rf.added_psd[i] - joule.added_psd[i]), 1e-12 * std::abs(joule.added_psd[i]));
        }
    }
}

TEST(SynthPsd, PaperConstantsGiveMonotoneWideTrace) {
    const Scenario sc = clean_scenario();
    const auto p_sig = dbm_grid(-22.5, -5.0, 0.5);
    const auto rf = synth_psd_trace(sc, PsdKind::Rf, p_sig, kSig, kDet, {false});
    for (std::size_t i = 1; i < rf.added_psd.size(); ++i) EXPECT_GT(rf.added_psd[i], rf.added_psd[i - 1]);
    EXPECT_GT(rf.added_psd.back() / rf.added_psd.front(), 10.0);
    const auto wide = synth_psd_trace(sc, PsdKind::Rf, dbm_grid(-30.0, 0.0, 0.5), kSig, kDet, {false});
    EXPECT_GT(wide.added_psd.back() / wide.added_psd.front(), 50.0);
}

TEST(SynthPsd, Deterministic) {
    const Scenario sc = paper_scenario(99);
    const auto axis = dbm_grid(-30.0, 0.0, 0.5);
    const auto a = synth_psd_trace(sc, PsdKind::Rf, axis, kSig, kDet);
    const auto b = synth_psd_trace(sc, PsdKind::Rf, axis, kSig, kDet);
    EXPECT_EQ(a.added_psd, b.added_psd);
    const auto c = synth_psd_trace(paper_scenario(100), PsdKind::Rf, axis, kSig, kDet);
    EXPECT_NE(a.added_psd, c.added_psd);
    // Streams are keyed by record label, so the RF and reference traces are independent.
    const auto ref = synth_psd_trace(sc, PsdKind::RfReference, axis, kSig, kDet);
    const auto ref_clean = synth_psd_trace(sc, PsdKind::RfReference, axis, kSig, kDet, {false});
    const auto rf_clean = synth_psd_trace(sc, PsdKind::Rf, axis, kSig, kDet, {false});
    EXPECT_NE(a.added_psd[0] - rf_clean.added_psd[0], ref.added_psd[0] - ref_clean.added_psd[0]);
}

TEST(SynthPsd, EnsembleMeanMatchesNoiseFree) {
    const auto axis = dbm_grid(-30.0, -5.0, 2.5);
    const auto clean = synth_psd_trace(clean_scenario(), PsdKind::Rf, axis, kSig, kDet, {false});
    const int n_seeds = 3000;
    std::vector<double> sum(axis.size(), 0.0), sum_sq(axis.size(), 0.0);
    for (int s = 0; s < n_seeds; ++s) {
        const auto tr = synth_psd_trace(clean_scenario(1000 + s), PsdKind::Rf, axis, kSig, kDet);
        for (std::size_t i = 0; i < axis.size(); ++i) {
            sum[i] += tr.added_psd[i];
            sum_sq[i] += tr.added_psd[i] * tr.added_psd[i];
        }
    }
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double mean = sum[i] / n_seeds;
        const double var = (sum_sq[i] - n_seeds * mean * mean) / (n_seeds - 1);
        const double se = std::sqrt(var / n_seeds);
        EXPECT_LT(std::abs(mean - clean.added_psd[i]), 3.0 * se) << "point " << i;
    }
}

TEST(SynthPsd, FloorScatterMatchesModel) {
    const Scenario sc = clean_scenario(8);
    std::vector<PowerLevel> zero(4000, PowerLevel(0.0));
    const auto tr = synth_psd_trace(sc, PsdKind::Joule, zero, std::nullopt, kDet);
    const double mean = std::accumulate(tr.added_psd.begin(), tr.added_psd.end(), 0.0) / tr.added_psd.size();
    double var = 0.0;
    for (double v : tr.added_psd) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (tr.added_psd.size() - 1));
    EXPECT_NEAR(sd, psd_floor_std(sc, kDet), 0.05 * psd_floor_std(sc, kDet));
}

TEST(SynthPsd, RfWithoutSignalFrequencyIsUsageError) {
    const auto axis = dbm_grid(-30.0, -20.0, 1.0);
    EXPECT_THROW(synth_psd_trace(clean_scenario(), PsdKind::Rf, axis, std::nullopt, kDet), UsageError);
    EXPECT_THROW(synth_psd_trace(clean_scenario(), PsdKind::RfReference, axis, std::nullopt, kDet), UsageError);
}

TEST(SynthPsd, DescendingAxisRejected) {
    std::vector<PowerLevel> axis{PowerLevel::from_dbm(-10), PowerLevel::from_dbm(-20)};
    EXPECT_THROW(synth_psd_trace(clean_scenario(), PsdKind::Rf, axis, kSig, kDet), UsageError);
}

TEST(SynthPsd, ReferenceLineIsQuietWithoutBulkhead) {
    Scenario sc = clean_scenario();
    sc.bulkhead.reset();
    const auto tr = synth_psd_trace(sc, PsdKind::RfReference, dbm_grid(-20, 0, 1), kSig, kDet, {false});
    for (double v : tr.added_psd) EXPECT_EQ(v, 0.0);
}

TEST(SynthTransient, ZeroPulseIsFlat) {
    const Scenario sc = clean_scenario();
    const auto grid = time_grid(5e-3, 1e-5);
    const auto tr = synth_transient(sc, PowerLevel(0.0), grid, 1e-3, 3e-3);
    for (const auto& t : tr.temperature) EXPECT_EQ(t, sc.noise_source.thermal.t_bath);
}

TEST(SynthTransient, PlateauMatchesSteadyState) {
    const Scenario sc = clean_scenario();
    const auto& tm = sc.noise_source.thermal;
    const auto p = power_for_temperature(tm, Temperature::mk(110.0));
    const auto grid = time_grid(10e-3, 1e-5);
    const auto tr = synth_transient(sc, p, grid, 1e-3, 5e-3);
    const auto on = static_cast<std::size_t>(std::lround(4.99e-3 / 1e-5));
    EXPECT_NEAR(tr.temperature[on].kelvin(), steady_state_temperature(tm, p).kelvin(), 1e-3 * 0.110);
    EXPECT_NEAR(tr.temperature.back().kelvin(), tm.t_bath.kelvin(), 1e-3 * tm.t_bath.kelvin());
}

TEST(SynthTransient, SegmentsFitSingleExponentials) {
    const Scenario sc = clean_scenario();
    const auto p = power_for_temperature(sc.noise_source.thermal, Temperature::mk(110.0));
    const auto grid = time_grid(10e-3, 2e-6);
    const auto tr = synth_transient(sc, p, grid, 1e-3, 5e-3);
    for (auto seg : {TransientSegment::Heat, TransientSegment::Cool}) {
        const auto fit = fit_exponential(tr, seg, {0.2});
        EXPECT_GT(*fit.metric("r_squared"), 0.99);
    }
}

TEST(SynthTransient, PulseOutsideGridIsUsageError) {
    const auto grid = time_grid(1e-3, 1e-5);
    EXPECT_THROW(synth_transient(clean_scenario(), PowerLevel(1e-12), grid, 0.5e-3, 2e-3), UsageError);
}

TEST(SynthThermometry, NoiseFreeFollowsSteadyState) {
    const Scenario sc = clean_scenario();
    const std::vector<PowerLevel> p{PowerLevel(1e-12), PowerLevel(1e-10), PowerLevel(1e-9)};
    const auto rec = synth_thermometry(sc, p, 0.0);
    ASSERT_EQ(rec.temperature.size(), 3u);
    EXPECT_NEAR(rec.temperature[2].kelvin(), 0.25708944246965021, 1e-12);
}

namespace {

// Generator power that delivers n_sig photons per window at the chip.
PowerLevel p_sig_for_photons(const Scenario& sc, double n_sig, Frequency f, double t_int) {
    const double p_input = n_sig * constants::planck * f.hz() / t_int;
    return PowerLevel(p_input / (sc.a_line().linear() * sc.a_att().linear()));
}

struct Moments {
    double mi, mq, vi, vq, cov;
};

Moments moments(const IqRecord& rec) {
    const double n = static_cast<double>(rec.samples.size());
    Moments m{0, 0, 0, 0, 0};
    for (const auto& s : rec.samples) {
        m.mi += s.i;
        m.mq += s.q;
    }
    m.mi /= n;
    m.mq /= n;
    for (const auto& s : rec.samples) {
        m.vi += (s.i - m.mi) * (s.i - m.mi);
        m.vq += (s.q - m.mq) * (s.q - m.mq);
        m.cov += (s.i - m.mi) * (s.q - m.mq);
    }
    m.vi /= n - 1;
    m.vq /= n - 1;
    m.cov /= n - 1;
    return m;
}

}  // namespace

TEST(SynthIq, QuantumLimitSnr) {
    Scenario sc = clean_scenario();
    sc.readout_added_photons = 0.0;
    const double t_int = 1e-6;
    IqSettings s{kSig, p_sig_for_photons(sc, 50.0, kSig, t_int), t_int, 200000, 1.0};
    EXPECT_NEAR(signal_photons(sc, s), 50.0, 1e-9);
    const auto m = moments(synth_iq(sc, s));
    const double snr = std::hypot(m.mi, m.mq) / std::sqrt(0.5 * (m.vi + m.vq));
    EXPECT_NEAR(snr, 10.0, 0.05);
}

TEST(SynthIq, IsotropicCovariance) {
    const Scenario sc = clean_scenario(21);
    const std::size_t n = 100000;
    IqSettings s{kSig, PowerLevel::from_dbm(-28.0), 1e-6, n, 1.0};
    const auto m = moments(synth_iq(sc, s));
    const double diag = 0.5 * (m.vi + m.vq);
    EXPECT_LT(std::abs(m.cov), 3.0 / std::sqrt(static_cast<double>(n)) * diag);
    EXPECT_NEAR(m.vi / m.vq, 1.0, 6.0 * std::sqrt(2.0 / n) * 2.0);
}

TEST(SynthIq, DoublingIntegrationTime) {
    const Scenario sc = clean_scenario();
    IqSettings s{kSig, PowerLevel::from_dbm(-28.0), 1e-6, 1000, 1.0};
    IqSettings s2 = s;
    s2.t_int_s = 2e-6;
    EXPECT_NEAR(signal_photons(sc, s2) / signal_photons(sc, s), 2.0, 1e-12);
    // Population SNR = sqrt(N_sig / (n_add + 1/2)).
    const double snr1 = std::sqrt(signal_photons(sc, s) / (sc.readout_added_photons + 0.5));
    const double snr2 = std::sqrt(signal_photons(sc, s2) / (sc.readout_added_photons + 0.5));
    EXPECT_NEAR(snr2 / snr1, std::sqrt(2.0), 1e-12);
}

TEST(SynthIq, DeterministicAndDiagnostics) {
    const Scenario sc = clean_scenario(5);
    IqSettings s{kSig, PowerLevel::from_dbm(-28.0), 1e-6, 50, 1.0};
    const auto a = synth_iq(sc, s);
    const auto b = synth_iq(sc, s);
    ASSERT_EQ(a.samples.size(), 50u);
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        EXPECT_EQ(a.samples[k].i, b.samples[k].i);
        EXPECT_EQ(a.samples[k].q, b.samples[k].q);
    }
    EXPECT_FALSE(a.diagnostics.empty());
    s.p_sig = PowerLevel(0.0);
    EXPECT_THROW(synth_iq(sc, s), DomainError);
}

TEST(Rng, StreamsAreLabelKeyed) {
    RngStream a(1, "x"), b(1, "x"), c(1, "y");
    for (int k = 0; k < 10; ++k) {
        const auto va = a.next_u64();
        EXPECT_EQ(va, b.next_u64());
        EXPECT_NE(va, c.next_u64());
    }
    EXPECT_EQ(fnv1a_64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a_64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, NormalMoments) {
    RngStream r(77, "normal");
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}
