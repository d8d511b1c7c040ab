#include "noisecal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "noisecal/photons.hpp"
#include "noisecal/rng.hpp"

namespace noisecal {

PowerRatio NoiseSource::attenuation() const { return tpad_transmission(pad); }

double PsdAcquisition::fractional_noise() const {
    return 1.0 / std::sqrt(span_hz * static_cast<double>(n_averages) * averaging_time_s);
}

void Scenario::validate() const {
    if (readout_gain.linear() < 1.0) throw DomainError("Scenario: readout gain must be >= 1");
    if (!(readout_added_photons >= 0.0) || !std::isfinite(readout_added_photons)) {
        throw DomainError("Scenario: readout added photons must be non-negative");
    }
    if (a_line().linear() > 1.0) throw DomainError("Scenario: drive chain must attenuate");
    if (!(noise_source.r_att_ohm > 0.0)) throw DomainError("Scenario: r_att must be positive");
    if (!(acquisition.rbw_hz > 0.0) || acquisition.rbw_hz > acquisition.span_hz) {
        throw DomainError("Scenario: rbw must be positive and not exceed span");
    }
    if (acquisition.n_averages < 1) throw DomainError("Scenario: n_averages must be positive");
    if (!(acquisition.averaging_time_s > 0.0)) throw DomainError("Scenario: averaging time must be positive");
    if (bulkhead && bulkhead->attenuation.linear() >= 1.0) {
        throw DomainError("Scenario: bulkhead attenuation must be below unity");
    }
}

std::string_view to_string(PsdKind kind) {
    switch (kind) {
        case PsdKind::Joule: return "joule";
        case PsdKind::Rf: return "rf";
        case PsdKind::RfReference: return "rf_reference";
    }
    return "unknown";
}

PsdKind psd_kind_from_string(std::string_view s) {
    if (s == "joule") return PsdKind::Joule;
    if (s == "rf") return PsdKind::Rf;
    if (s == "rf_reference") return PsdKind::RfReference;
    throw UsageError("unknown PSD kind '" + std::string(s) + "'");
}

void PsdTrace::validate() const {
    if (drive_axis.size() != added_psd.size()) throw DomainError("PsdTrace: axes differ in length");
    if (!(rbw_hz > 0.0) || rbw_hz > span_hz) throw DomainError("PsdTrace: rbw must be positive and <= span");
    if (n_averages < 1) throw DomainError("PsdTrace: n_averages must be positive");
    if (kind != PsdKind::Joule && !f_sig) throw UsageError("PsdTrace: RF traces need f_sig");
    for (double v : added_psd) {
        if (!std::isfinite(v)) throw DomainError("PsdTrace: non-finite added PSD");
    }
}

std::vector<double> PsdTrace::drive_dbm() const {
    std::vector<double> out;
    out.reserve(drive_axis.size());
    for (const auto& p : drive_axis) out.push_back(p.dbm());
    return out;
}

void TransientTrace::validate() const {
    if (time_s.size() != temperature.size()) throw DomainError("TransientTrace: axes differ in length");
    for (std::size_t i = 1; i < time_s.size(); ++i) {
        if (!(time_s[i] > time_s[i - 1])) throw DomainError("TransientTrace: time must be strictly increasing");
    }
}

void IqRecord::validate() const {
    if (samples.size() < 2) throw DomainError("IqRecord: at least two samples required");
    if (!(t_int_s > 0.0)) throw DomainError("IqRecord: integration time must be positive");
    if (!(digitizer_scale > 0.0)) throw DomainError("IqRecord: digitizer scale must be positive");
}

double on_chip_added_occupation(const Scenario& sc, PowerLevel dissipated, Frequency f_det) {
    const auto& tm = sc.noise_source.thermal;
    const double t_e = steady_state_temperature(tm, dissipated).kelvin();
    const double t0 = tm.t_bath.kelvin();
    if (t_e == t0) return 0.0;
    const double n_hot = bose_einstein(Temperature(t_e), f_det).photons();
    const double n_idle = bose_einstein(tm.t_bath, f_det).photons();
    return (1.0 - sc.a_att().linear()) * (n_hot - n_idle);
}

double bulkhead_added_occupation(const Scenario& sc, PowerLevel p_sig, Frequency f_det) {
    if (!sc.bulkhead) return 0.0;
    const auto& bh = *sc.bulkhead;
    const double a_b = bh.attenuation.linear();
    const double absorbed = p_sig.watts() * (sc.a_line().linear() / a_b) * (1.0 - a_b);
    const double t_b = steady_state_temperature(bh.body, PowerLevel(absorbed)).kelvin();
    if (t_b == bh.body.t_bath.kelvin()) return 0.0;
    const double n_hot = bose_einstein(Temperature(t_b), f_det).photons();
    const double n_idle = bose_einstein(bh.body.t_bath, f_det).photons();
    return (1.0 - a_b) * (n_hot - n_idle);
}

double idle_output_occupation(const Scenario& sc, Frequency f_det) {
    const double n_source = bose_einstein(sc.source_temperature, f_det).photons();
    const double n_line = propagate_occupation(sc.drive_chain, Occupation(n_source), f_det).photons();
    const double a_att = sc.a_att().linear();
    const double n_pad = bose_einstein(sc.noise_source.thermal.t_bath, f_det).photons();
    return a_att * n_line + (1.0 - a_att) * n_pad + sc.base_occupation_offset.photons();
}

double psd_floor_std(const Scenario& sc, Frequency f_det) {
    const double quantum = sc.readout_gain.linear() * photon_energy(f_det);
    const double floor_photons = idle_output_occupation(sc, f_det) + 0.5 + sc.readout_added_photons;
    return std::sqrt(2.0) * quantum * floor_photons * sc.acquisition.fractional_noise();
}

std::string psd_stream_label(PsdKind kind, std::optional<Frequency> f_sig, Frequency f_det) {
    std::ostringstream os;
    os.precision(17);
    os << "psd/" << to_string(kind) << '/' << (f_sig ? f_sig->hz() : 0.0) << '/' << f_det.hz();
    return os.str();
}

PsdTrace synth_psd_trace(const Scenario& sc, PsdKind kind, const std::vector<PowerLevel>& drive_axis,
                         std::optional<Frequency> f_sig, Frequency f_det, const SynthOptions& options) {
    sc.validate();
    if (kind != PsdKind::Joule && !f_sig) {
        throw UsageError("synth_psd_trace: RF traces require f_sig");
    }
    for (std::size_t i = 1; i < drive_axis.size(); ++i) {
        if (drive_axis[i] < drive_axis[i - 1]) throw UsageError("synth_psd_trace: drive axis must be ascending");
    }

    const double quantum = sc.readout_gain.linear() * photon_energy(f_det);
    const double floor_photons = idle_output_occupation(sc, f_det) + 0.5 + sc.readout_added_photons;
    const double frac = sc.acquisition.fractional_noise();
    const PowerRatio a_line = sc.a_line();
    const PowerRatio a_att = sc.a_att();
    const bool contaminated = sc.bulkhead && sc.bulkhead->contaminates_rf;

    RngStream rng(sc.rng_seed, psd_stream_label(kind, f_sig, f_det));

    PsdTrace trace{kind, drive_axis, {}, f_det, kind == PsdKind::Joule ? std::nullopt : f_sig,
                   sc.acquisition.rbw_hz, sc.acquisition.span_hz, sc.acquisition.n_averages};
    trace.added_psd.reserve(drive_axis.size());

    for (const auto& p : drive_axis) {
        double dn = 0.0;
        switch (kind) {
            case PsdKind::Joule:
                dn = on_chip_added_occupation(sc, p, f_det);
                break;
            case PsdKind::Rf:
                dn = on_chip_added_occupation(sc, dissipated_rf_power(a_line, a_att, p), f_det);
                if (contaminated) dn += a_att.linear() * bulkhead_added_occupation(sc, p, f_det);
                break;
            case PsdKind::RfReference:
                dn = bulkhead_added_occupation(sc, p, f_det);
                break;
        }
        double value = quantum * dn;
        if (options.noise) {
            const double on = quantum * (floor_photons + dn);
            const double off = quantum * floor_photons;
            value += on * frac * rng.normal() - off * frac * rng.normal();
        }
        trace.added_psd.push_back(value);
    }
    return trace;
}

TransientTrace synth_transient(const Scenario& sc, PowerLevel pulse_power, const std::vector<double>& t_grid,
                               double t_on_s, double t_off_s, double relative_noise) {
    if (t_grid.size() < 2 || !(t_on_s >= t_grid.front()) || !(t_off_s <= t_grid.back()) || !(t_off_s > t_on_s)) {
        throw UsageError("synth_transient: pulse window must lie inside the time grid");
    }
    const auto schedule = PowerSchedule::pulse(pulse_power, t_on_s, t_off_s);
    auto temps = transient_temperature(sc.noise_source.thermal, schedule, t_grid);
    if (relative_noise > 0.0) {
        RngStream rng(sc.rng_seed, "transient");
        for (auto& t : temps) t = Temperature(t.kelvin() * (1.0 + relative_noise * rng.normal()));
    }
    return TransientTrace{t_grid, std::move(temps), t_on_s, t_off_s};
}

ThermometryRecord synth_thermometry(const Scenario& sc, const std::vector<PowerLevel>& p_joule,
                                    double relative_noise) {
    ThermometryRecord rec;
    RngStream rng(sc.rng_seed, "thermometry");
    for (const auto& p : p_joule) {
        double t = steady_state_temperature(sc.noise_source.thermal, p).kelvin();
        if (relative_noise > 0.0) t *= 1.0 + relative_noise * rng.normal();
        rec.p_joule.push_back(p);
        rec.temperature.emplace_back(t);
    }
    return rec;
}

double signal_photons(const Scenario& sc, const IqSettings& settings) {
    const double p_input = sc.a_line().linear() * sc.a_att().linear() * settings.p_sig.watts();
    return p_input * settings.t_int_s / photon_energy(settings.f_sig);
}

IqRecord synth_iq(const Scenario& sc, const IqSettings& settings) {
    sc.validate();
    if (settings.p_sig.watts() <= 0.0) throw DomainError("synth_iq: zero input power gives a degenerate record");
    if (!(settings.t_int_s > 0.0)) throw DomainError("synth_iq: integration time must be positive");
    if (settings.n_samples < 2) throw DomainError("synth_iq: at least two samples required");
    if (!(settings.digitizer_scale > 0.0)) throw DomainError("synth_iq: digitizer scale must be positive");

    const double n_sig = signal_photons(sc, settings);
    const double flux_in = n_sig / settings.t_int_s;
    const double mu = settings.digitizer_scale * std::sqrt(sc.readout_gain.linear() * flux_in);
    const double snr = std::sqrt(n_sig / (sc.readout_added_photons + 0.5));
    const double sigma = mu / snr;

    std::ostringstream label;
    label.precision(17);
    label << "iq/" << settings.f_sig.hz();
    RngStream rng(sc.rng_seed, label.str());
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const double mi = mu * std::cos(phase);
    const double mq = mu * std::sin(phase);

    IqRecord rec{{}, settings.t_int_s, settings.f_sig, settings.p_sig, settings.digitizer_scale, {}};
    rec.samples.reserve(settings.n_samples);
    for (std::size_t k = 0; k < settings.n_samples; ++k) {
        const double i = mi + sigma * rng.normal();
        const double q = mq + sigma * rng.normal();
        rec.samples.push_back({i, q});
    }
    if (settings.n_samples < 100) {
        rec.diagnostics.push_back("fewer than 100 IQ samples: moment estimates are unreliable");
    }
    return rec;
}

}  // namespace noisecal
