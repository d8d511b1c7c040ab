#pragma once

#include <optional>
#include <vector>

#include "noisecal/fit_result.hpp"
#include "noisecal/synth.hpp"
#include "noisecal/units.hpp"

namespace noisecal {

struct PowerTemperaturePoint {
    PowerLevel power;
    Temperature temperature;
};

struct PowerLawFitOptions {
    // Fit only sigma_v with alpha held at this value.
    std::optional<double> fixed_alpha;
};

/// Fits P = sigma_v (T^alpha - T_bath^alpha) to thermometer readings.
///
/// Residuals are taken in log temperature, ln T_model(P) - ln T_obs, which is the
/// natural error model for a thermometer with multiplicative noise. Parameters:
/// "sigma_v" (W K^-alpha) and "alpha".
FitResult fit_power_law(const std::vector<PowerTemperaturePoint>& points, Temperature t_bath,
                        const PowerLawFitOptions& options = {});

enum class TransientSegment { Heat, Cool };

struct ExponentialFitOptions {
    // Drop this leading fraction of the segment before fitting.
    double skip_fraction = 0.0;
};

/// Fits y(t) = y_inf + (y_0 - y_inf) exp(-(t - t_s) / tau) to one segment of a
/// transient, t_s being the first sample of the segment. Parameters: "tau",
/// "asymptote", "amplitude" (y_0 - y_inf); metric "r_squared".
FitResult fit_exponential(const TransientTrace& trace, TransientSegment segment,
                          const ExponentialFitOptions& options = {});

/// Same model on raw samples.
FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace noisecal
