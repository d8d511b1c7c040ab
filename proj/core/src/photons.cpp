#include "noisecal/photons.hpp"

#include <cmath>

#include "noisecal/constants.hpp"

namespace noisecal {

double photon_energy(Frequency f) { return constants::planck * f.hz(); }

Occupation bose_einstein(Temperature t, Frequency f) {
    const double x = photon_energy(f) / (constants::boltzmann * t.kelvin());
    // expm1 keeps full precision in the Rayleigh-Jeans limit x -> 0.
    return Occupation(1.0 / std::expm1(x));
}

Temperature occupation_to_temperature(Occupation n, Frequency f) {
    if (n.photons() <= 0.0) {
        throw DomainError("occupation_to_temperature: temperature undefined at zero occupation");
    }
    const double t_quantum = photon_energy(f) / constants::boltzmann;
    return Temperature(t_quantum / std::log1p(1.0 / n.photons()));
}

}  // namespace noisecal
