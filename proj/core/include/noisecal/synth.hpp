#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noisecal/chain.hpp"
#include "noisecal/thermal.hpp"
#include "noisecal/tpad.hpp"
#include "noisecal/units.hpp"

namespace noisecal {

/// The heatable on-chip attenuator.
struct NoiseSource {
    ThermalModel thermal;
    TPadNetwork pad;
    double r_att_ohm = 67.0;

    PowerRatio attenuation() const;
};

/// Lumped thermal body standing in for the mixing-chamber bulkhead attenuator.
/// Its absorbed power is P_sig * (A_line / A_b) * (1 - A_b).
struct BulkheadModel {
    ThermalModel body;
    PowerRatio attenuation;
    // When set, Rf traces through the noise-source line carry A_att times the
    // bulkhead emission in addition to the on-chip noise.
    bool contaminates_rf = false;
};

/// Spectrum-analyzer acquisition settings for PSD traces.
struct PsdAcquisition {
    double rbw_hz = 3052.0;
    double span_hz = 5e6;
    int n_averages = 100;
    // Dwell time per average and per resolution bin.
    double averaging_time_s = 1.3;

    /// Fractional radiometer noise of one trace point: 1 / sqrt(span * n_averages * t_avg),
    /// i.e. the per-bin radiometer noise averaged over span / rbw bins.
    double fractional_noise() const;
};

struct Scenario {
    ChainSpec drive_chain;
    NoiseSource noise_source;
    PowerRatio readout_gain;
    double readout_added_photons;
    Occupation base_occupation_offset{0.0};
    Temperature source_temperature{300.0};
    std::optional<BulkheadModel> bulkhead;
    PsdAcquisition acquisition;
    std::uint64_t rng_seed = 0;

    /// Validates cross-field invariants; throws DomainError.
    void validate() const;

    PowerRatio a_line() const { return drive_chain.transmission(); }
    PowerRatio a_att() const { return noise_source.attenuation(); }
};

enum class PsdKind { Joule, Rf, RfReference };

std::string_view to_string(PsdKind kind);
PsdKind psd_kind_from_string(std::string_view s);

/// Heater-on minus heater-off output PSD versus drive power.
struct PsdTrace {
    PsdKind kind;
    std::vector<PowerLevel> drive_axis;  // P_Joule for Joule traces, P_sig at the generator otherwise
    std::vector<double> added_psd;       // W / Hz
    Frequency f_det;
    std::optional<Frequency> f_sig;
    double rbw_hz;
    double span_hz;
    int n_averages;

    void validate() const;
    std::vector<double> drive_dbm() const;
};

struct TransientTrace {
    std::vector<double> time_s;
    std::vector<Temperature> temperature;
    double t_on_s;
    double t_off_s;

    void validate() const;
};

struct IqSample {
    double i;
    double q;
};

struct IqRecord {
    std::vector<IqSample> samples;
    double t_int_s;
    Frequency f_sig;
    PowerLevel p_sig;
    double digitizer_scale = 1.0;  // digitizer units per sqrt(photon / s)
    std::vector<std::string> diagnostics;

    void validate() const;
};

/// Thermometer readings of the film temperature versus Joule power.
struct ThermometryRecord {
    std::vector<PowerLevel> p_joule;
    std::vector<Temperature> temperature;
};

struct SynthOptions {
    bool noise = true;
};

/// Added occupation at the noise-source output for a given dissipated power.
double on_chip_added_occupation(const Scenario& sc, PowerLevel dissipated, Frequency f_det);

/// Added occupation emitted by the bulkhead body for a generator power p_sig.
double bulkhead_added_occupation(const Scenario& sc, PowerLevel p_sig, Frequency f_det);

/// Heater-off occupation at the noise-source output plane (line noise through the
/// pad, pad emission at bath temperature, and the configured offset).
double idle_output_occupation(const Scenario& sc, Frequency f_det);

/// Standard deviation of an added-PSD point with no drive applied (W / Hz).
double psd_floor_std(const Scenario& sc, Frequency f_det);

PsdTrace synth_psd_trace(const Scenario& sc, PsdKind kind, const std::vector<PowerLevel>& drive_axis,
                         std::optional<Frequency> f_sig, Frequency f_det, const SynthOptions& options = {});

TransientTrace synth_transient(const Scenario& sc, PowerLevel pulse_power, const std::vector<double>& t_grid,
                               double t_on_s, double t_off_s, double relative_noise = 0.0);

ThermometryRecord synth_thermometry(const Scenario& sc, const std::vector<PowerLevel>& p_joule,
                                    double relative_noise);

struct IqSettings {
    Frequency f_sig;
    PowerLevel p_sig;
    double t_int_s;
    std::size_t n_samples;
    double digitizer_scale = 1.0;
};

/// Input-referenced signal photons per integration window, A_line A_att P_sig t_int / (h f).
double signal_photons(const Scenario& sc, const IqSettings& settings);

IqRecord synth_iq(const Scenario& sc, const IqSettings& settings);

/// RNG stream label for a PSD trace, stable across runs.
std::string psd_stream_label(PsdKind kind, std::optional<Frequency> f_sig, Frequency f_det);

}  // namespace noisecal
