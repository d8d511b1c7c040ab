#pragma once

#include "noisecal/units.hpp"

namespace noisecal {

/// Thermal occupation 1 / (exp(h f / k_B T) - 1) of a mode at frequency f.
Occupation bose_einstein(Temperature t, Frequency f);

/// Inverse of bose_einstein. Throws DomainError for zero occupation.
Temperature occupation_to_temperature(Occupation n, Frequency f);

/// Quantum energy h f in joules.
double photon_energy(Frequency f);

}  // namespace noisecal
