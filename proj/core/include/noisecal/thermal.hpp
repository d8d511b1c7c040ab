#pragma once

#include <span>
#include <vector>

#include "noisecal/units.hpp"

namespace noisecal {

/// Electron-phonon heat balance of a thin metal film.
///
/// Steady state: P = sigma * volume * (T_e^alpha - T_bath^alpha).
/// Electronic heat capacity: C(T) = gamma * volume * T.
struct ThermalModel {
    double sigma;       // W m^-3 K^-alpha
    double alpha;       // dimensionless exponent
    double volume;      // m^3
    Temperature t_bath;
    double gamma;       // J m^-3 K^-2

    ThermalModel(double sigma, double alpha, double volume, Temperature t_bath, double gamma = 220.0);

    double sigma_v() const { return sigma * volume; }
    /// Net power flowing from electrons to phonons at electron temperature t.
    double cooling_power(double t_kelvin) const;
    double heat_capacity(double t_kelvin) const { return gamma * volume * t_kelvin; }
    /// Small-signal relaxation time C / G_th = gamma T^(2 - alpha) / (alpha sigma).
    double linearized_time_constant(double t_kelvin) const;
};

Temperature steady_state_temperature(const ThermalModel& tm, PowerLevel p);

/// Inverse of steady_state_temperature: power needed to hold the film at t.
PowerLevel power_for_temperature(const ThermalModel& tm, Temperature t);

PowerLevel joule_power(double r_att_ohm, double current_a);

/// P_RF = A_line (1 - A_att) P_sig.
PowerLevel dissipated_rf_power(PowerRatio a_line, PowerRatio a_att, PowerLevel p_sig);

/// Piecewise-constant power: segment k applies from start_s[k] until start_s[k+1].
/// Times before the first start use the first power.
struct PowerStep {
    double start_s;
    PowerLevel power;
};

class PowerSchedule {
public:
    explicit PowerSchedule(std::vector<PowerStep> steps);
    static PowerSchedule constant(PowerLevel p) { return PowerSchedule({{0.0, p}}); }
    /// Off before t_on, p during [t_on, t_off), off afterwards.
    static PowerSchedule pulse(PowerLevel p, double t_on, double t_off);

    PowerLevel at(double t) const;
    const std::vector<PowerStep>& steps() const { return steps_; }

private:
    std::vector<PowerStep> steps_;
};

struct TransientOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;  // kelvin
};

/// Integrates gamma V T dT/dt = P(t) - sigma V (T^alpha - T_bath^alpha) on t_grid,
/// starting from the steady state of the power applied at t_grid.front().
std::vector<Temperature> transient_temperature(const ThermalModel& tm, const PowerSchedule& power,
                                               std::span<const double> t_grid,
                                               const TransientOptions& options = {});

}  // namespace noisecal
