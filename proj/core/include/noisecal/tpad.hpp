#pragma once

#include "noisecal/units.hpp"

namespace noisecal {

/// Symmetric resistive T attenuator: two series arms and one shunt to ground.
///
/// r_shunt is the effective shunt resistance. A layout with two parallel
/// shunt legs of R each is described by r_shunt = R / 2.
struct TPadNetwork {
    double r_series;
    double r_shunt;
    double z0 = 50.0;

    TPadNetwork(double series, double shunt, double ref_impedance = 50.0);

    /// DC resistance from the input port to ground through one arm and the shunt.
    double dc_resistance_to_ground() const { return r_series + r_shunt; }
};

/// |S21|^2 of the pad between z0 terminations, from the ABCD cascade
/// series(r_series) * shunt(r_shunt) * series(r_series).
PowerRatio tpad_transmission(const TPadNetwork& net);

/// Matched T-pad with the requested insertion loss (target_db < 0).
TPadNetwork tpad_from_attenuation(double target_db, double z0 = 50.0);

}  // namespace noisecal
