#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace noisecal {

struct FitParameter {
    std::string name;
    double value;
    double std_error;
};

/// Outcome of one estimator: named parameters with standard errors plus diagnostics.
struct FitResult {
    std::vector<FitParameter> params;
    double residual_norm = 0.0;
    std::size_t n_points = 0;
    std::optional<std::pair<double, double>> window;
    // Auxiliary scalars (r_squared, overlap_count, ...).
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> diagnostics;

    const FitParameter& param(std::string_view name) const;
    double value(std::string_view name) const { return param(name).value; }
    double error(std::string_view name) const { return param(name).std_error; }
    std::optional<double> metric(std::string_view name) const;
};

struct ValueWithError {
    double value;
    double error;
};

}  // namespace noisecal
