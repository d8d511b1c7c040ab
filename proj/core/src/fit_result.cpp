#include "noisecal/fit_result.hpp"

#include <stdexcept>

namespace noisecal {

const FitParameter& FitResult::param(std::string_view name) const {
    for (const auto& p : params) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("FitResult: no parameter named '" + std::string(name) + "'");
}

std::optional<double> FitResult::metric(std::string_view name) const {
    for (const auto& [k, v] : metrics) {
        if (k == name) return v;
    }
    return std::nullopt;
}

}  // namespace noisecal
