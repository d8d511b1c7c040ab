#pragma once

#include <string_view>

#include "noisecal/fit_result.hpp"
#include "noisecal/synth.hpp"
#include "noisecal/units.hpp"

namespace noisecal {

/// Added noise of the amplification chain from the scatter of a weak coherent tone:
/// n_add = N_sig sigma^2 / mu^2 - 1/2 with N_sig = p_input t_int / (h f_sig).
///
/// mu is the magnitude of the sample mean (corrected for its noise bias) and
/// sigma^2 the pooled variance of both quadratures. Parameters: "n_add", "mu",
/// "sigma". Metrics: "n_sig", "snr", "isotropy_offdiag", "isotropy_var_ratio".
FitResult added_noise_from_iq(const IqRecord& rec, PowerLevel p_input);

/// Output tone power (mu / digitizer_scale)^2 h f_sig implied by a mean amplitude mu.
PowerLevel output_tone_power(const IqRecord& rec, double mu);

/// G = output / input.
PowerRatio gain_estimate(PowerLevel output_tone_power, PowerLevel p_input);

/// Gain in dB with errors added in quadrature (both in dB).
ValueWithError gain_with_uncertainty(PowerLevel output_tone_power, PowerLevel p_input, double input_err_db,
                                     double output_err_db = 0.0);

/// Unit conventions for the thermometer-referenced attenuation.
enum class ThermometerConvention {
    SiAngular,        // hbar * omega_ge * Gamma / (8 P), Gamma in rad/s
    CyclicLinewidth,  // hbar * omega_ge * (Gamma / 2 pi) / (8 P)
    PlanckCyclic,     // h * nu_ge * (Gamma / 2 pi) / (8 P)
};

ThermometerConvention thermometer_convention_from_string(std::string_view s);
std::string_view to_string(ThermometerConvention c);

/// Line attenuation to a transmon thermometer from the reflection minimum, where
/// the drive rate satisfies Omega / Gamma = 1 / sqrt(2):
/// A = hbar omega_ge Omega^2 / (4 Gamma P_in) = hbar omega_ge Gamma / (8 P_in).
/// `linewidth_rad_s` is the angular linewidth Gamma.
PowerRatio thermometer_attenuation(Frequency f_ge, double linewidth_rad_s, PowerLevel p_in_min,
                                   ThermometerConvention convention = ThermometerConvention::SiAngular);

/// General form with an explicit drive rate (SI angular units).
PowerRatio thermometer_attenuation_from_drive(Frequency f_ge, double linewidth_rad_s, double drive_rate_rad_s,
                                              PowerLevel p_in);

}  // namespace noisecal
