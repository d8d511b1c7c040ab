#include "noisecal/tpad.hpp"

#include <cmath>
#include <limits>

namespace noisecal {

TPadNetwork::TPadNetwork(double series, double shunt, double ref_impedance)
    : r_series(series), r_shunt(shunt), z0(ref_impedance) {
    // r_shunt = +inf is the open-shunt limit; everything else must be a positive resistance.
    const bool ok = r_series > 0.0 && std::isfinite(r_series) && r_shunt > 0.0 && z0 > 0.0 &&
                    std::isfinite(z0);
    if (!ok) {
        throw DomainError("TPadNetwork: resistances and reference impedance must be positive");
    }
}

PowerRatio tpad_transmission(const TPadNetwork& net) {
    const double g_shunt = 1.0 / net.r_shunt;
    const double a = 1.0 + net.r_series * g_shunt;
    const double b = 2.0 * net.r_series + net.r_series * net.r_series * g_shunt;
    const double c = g_shunt;
    const double d = a;
    const double s21 = 2.0 / (a + b / net.z0 + c * net.z0 + d);
    return PowerRatio(s21 * s21);
}

TPadNetwork tpad_from_attenuation(double target_db, double z0) {
    if (!(target_db < 0.0)) {
        throw DomainError("tpad_from_attenuation: target attenuation must be negative dB");
    }
    if (!(z0 > 0.0)) throw DomainError("tpad_from_attenuation: z0 must be positive");
    const double k = std::pow(10.0, -target_db / 20.0);
    const double r_series = z0 * (k - 1.0) / (k + 1.0);
    const double r_shunt = 2.0 * z0 * k / (k * k - 1.0);
    return TPadNetwork(r_series, r_shunt, z0);
}

}  // namespace noisecal
