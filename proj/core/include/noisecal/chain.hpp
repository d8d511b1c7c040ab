#pragma once

#include <variant>
#include <vector>

#include "noisecal/units.hpp"

namespace noisecal {

struct AttenuatorStage {
    PowerRatio attenuation;
    Temperature physical_temperature;

    AttenuatorStage(PowerRatio a, Temperature t);
};

/// Phase-insensitive amplifier; added_photons is referred to its input.
struct AmplifierStage {
    PowerRatio gain;
    double added_photons;

    AmplifierStage(PowerRatio g, double added);
};

using ChainStage = std::variant<AttenuatorStage, AmplifierStage>;

/// Ordered input-to-output description of a microwave line.
class ChainSpec {
public:
    explicit ChainSpec(std::vector<ChainStage> stages);

    const std::vector<ChainStage>& stages() const { return stages_; }

    /// Product of all stage power ratios (attenuations and gains).
    PowerRatio transmission() const;

private:
    std::vector<ChainStage> stages_;
};

/// Propagates a thermal occupation through the chain with the beam-splitter
/// model for attenuators and n_out = G (n_in + n_added) for amplifiers.
Occupation propagate_occupation(const ChainSpec& chain, Occupation n_in, Frequency f);

}  // namespace noisecal
