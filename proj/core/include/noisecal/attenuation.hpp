#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noisecal/fit_result.hpp"
#include "noisecal/synth.hpp"
#include "noisecal/units.hpp"

namespace noisecal {

/// Inclusive drive-power range in dBm at the generator plane.
struct FitWindow {
    double p_lo_dbm;
    double p_hi_dbm;
};

/// Robust (MAD) estimate of the added-PSD scatter from the lowest-power points of a trace.
double estimate_floor_std(const PsdTrace& trace, std::size_t n_lowest = 8);

struct WindowOptions {
    double k_floor = 5.0;
};

/// Chooses the overlap window: starts at the first point clearly above the noise
/// floor and stops at the reference-line onset, the override, or the last point.
/// Crossings are detected on a 3-point running median.
FitWindow select_fit_window(const PsdTrace& rf, double floor_std, const PsdTrace* reference = nullptr,
                            std::optional<double> p_max_override_dbm = std::nullopt,
                            const WindowOptions& options = {});

struct ShiftFitOptions {
    int bootstrap_resamples = 500;
    std::uint64_t seed = 0;
};

/// Horizontal shift (dB) that overlays `rf` on `joule` in (dBm, log PSD) space:
/// PSD_rf(P) = PSD_joule(P + shift). Parameter "a_total_db"; metric "overlap_count".
/// The window restricts the points of the second trace.
FitResult fit_psd_shift(const PsdTrace& joule, const PsdTrace& rf, const FitWindow& window,
                        const ShiftFitOptions& options = {});

/// A_line = A / (1 - A_att).
PowerRatio a_line_from_total(PowerRatio a_total, PowerRatio a_att);

/// Bulkhead share A_att PSD_other / PSD_tot of the measured noise, clamped to [0, 1].
double contamination_fraction(double psd_total, double psd_other, PowerRatio a_att);

/// Same, with both PSDs interpolated linearly in dBm at `at_power`.
double contamination_fraction(const PsdTrace& total, const PsdTrace& reference, PowerRatio a_att,
                              PowerLevel at_power);

struct ProfileInput {
    PsdTrace joule;
    PsdTrace rf;
    FitWindow window;
};

struct ProfileEntry {
    Frequency f_sig;
    Frequency f_det;
    double a_line_db = 0.0;
    double a_line_err_db = 0.0;
    std::size_t overlap_count = 0;
    // Spread of A_line between detection bands sharing this f_sig.
    std::optional<double> discrepancy_db;
    std::optional<std::string> error;
};

struct ProfileOptions {
    ShiftFitOptions shift;
    unsigned jobs = 1;
};

/// Line attenuation versus signal frequency, one entry per input pair in input order.
/// Failed fits are returned as flagged entries.
std::vector<ProfileEntry> attenuation_profile(const std::vector<ProfileInput>& inputs, PowerRatio a_att,
                                              const ProfileOptions& options = {});

}  // namespace noisecal
