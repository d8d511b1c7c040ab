#include "noisecal/chain.hpp"

#include <cmath>

#include "noisecal/photons.hpp"

namespace noisecal {

AttenuatorStage::AttenuatorStage(PowerRatio a, Temperature t) : attenuation(a), physical_temperature(t) {
    if (a.linear() > 1.0) throw DomainError("AttenuatorStage: attenuation must lie in (0, 1]");
}

AmplifierStage::AmplifierStage(PowerRatio g, double added) : gain(g), added_photons(added) {
    if (g.linear() < 1.0) throw DomainError("AmplifierStage: gain must be >= 1");
    if (!(added >= 0.0) || !std::isfinite(added)) {
        throw DomainError("AmplifierStage: added photons must be non-negative");
    }
}

ChainSpec::ChainSpec(std::vector<ChainStage> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) throw DomainError("ChainSpec: chain must contain at least one stage");
}

PowerRatio ChainSpec::transmission() const {
    double total = 1.0;
    for (const auto& stage : stages_) {
        total *= std::visit(
            [](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, AttenuatorStage>) {
                    return s.attenuation.linear();
                } else {
                    return s.gain.linear();
                }
            },
            stage);
    }
    return PowerRatio(total);
}

Occupation propagate_occupation(const ChainSpec& chain, Occupation n_in, Frequency f) {
    double n = n_in.photons();
    for (const auto& stage : chain.stages()) {
        if (const auto* att = std::get_if<AttenuatorStage>(&stage)) {
            const double n_th = bose_einstein(att->physical_temperature, f).photons();
            // Written as a relaxation toward n_th so that n == n_th is an exact fixed point.
            n = n_th + att->attenuation.linear() * (n - n_th);
        } else {
            const auto& amp = std::get<AmplifierStage>(stage);
            n = amp.gain.linear() * (n + amp.added_photons);
        }
    }
    return Occupation(n);
}

}  // namespace noisecal
