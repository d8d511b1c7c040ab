#pragma once

#include <numbers>

namespace noisecal::constants {

// CODATA 2018 exact SI values.
inline constexpr double planck = 6.62607015e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);

}  // namespace noisecal::constants
