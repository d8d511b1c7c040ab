#include "noisecal/presets.hpp"

#include <cmath>

namespace noisecal {

Scenario paper_scenario(std::uint64_t seed) {
    ChainSpec line({
        AttenuatorStage(PowerRatio::from_db(-14.2), Temperature(300.0)),
        AttenuatorStage(PowerRatio::from_db(-20.0), Temperature(4.0)),
        AttenuatorStage(PowerRatio::from_db(-20.0), Temperature(0.1)),
        AttenuatorStage(PowerRatio::from_db(-20.0), Temperature(0.01)),
    });
    constexpr double sigma = 2.53e10;
    constexpr double sigma_v = 9.21e-6;
    ThermalModel film(sigma, 6.72, sigma_v / sigma, Temperature::mk(60.4), 220.0);
    NoiseSource source{film, tpad_from_attenuation(-10.8), 67.0};

    BulkheadModel bulkhead{ThermalModel(0.238, 8.0, 1.0, Temperature::mk(20.0), 220.0), PowerRatio::from_db(-20.0),
                           true};

    Scenario sc{std::move(line),
                source,
                PowerRatio::from_db(70.2),
                23.6,
                Occupation(0.0),
                Temperature(300.0),
                bulkhead,
                PsdAcquisition{},
                seed};
    sc.validate();
    return sc;
}

std::vector<PowerLevel> dbm_grid(double start_dbm, double stop_dbm, double step_db) {
    std::vector<PowerLevel> out;
    const auto n = static_cast<long>(std::floor((stop_dbm - start_dbm) / step_db + 0.5));
    for (long k = 0; k <= n; ++k) out.push_back(PowerLevel::from_dbm(start_dbm + static_cast<double>(k) * step_db));
    return out;
}

std::vector<double> time_grid(double t_end_s, double dt_s) {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor(t_end_s / dt_s + 0.5));
    for (long k = 0; k <= n; ++k) out.push_back(static_cast<double>(k) * dt_s);
    return out;
}

}  // namespace noisecal
