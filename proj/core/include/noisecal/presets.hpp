#pragma once

#include <cstdint>
#include <vector>

#include "noisecal/synth.hpp"

namespace noisecal {

/// Scenario mirroring the measured device: -74.2 dB input line, -10.8 dB chromium
/// pad (Sigma = 2.53e10 W m^-3 K^-alpha, alpha = 6.72, T_0 = 60.4 mK), 70.2 dB
/// readout gain with 23.6 added photons, and a bulkhead body whose reference-line
/// noise onsets near P_sig = -15.5 dBm.
Scenario paper_scenario(std::uint64_t seed = 1);

/// Inclusive grid start, start + step, ... <= stop (with a half-step tolerance), in dBm.
std::vector<PowerLevel> dbm_grid(double start_dbm, double stop_dbm, double step_db);

/// Uniform time grid [0, t_end] with spacing dt.
std::vector<double> time_grid(double t_end_s, double dt_s);

}  // namespace noisecal
