#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noisecal/fit_result.hpp"
#include "noisecal/units.hpp"

namespace noisecal {

/// Calibrated quantities at one signal frequency. Missing values carry a failure reason.
struct CalibrationRow {
    Frequency f_sig;
    std::optional<ValueWithError> a_line_db;
    std::optional<ValueWithError> gain_db;
    std::optional<ValueWithError> n_add_photons;
    std::vector<std::string> failures;
};

struct CalibrationResult {
    double a_att_db = 0.0;
    std::vector<CalibrationRow> rows;
    std::optional<ValueWithError> sigma_v;  // W K^-alpha
    std::optional<ValueWithError> alpha;
    std::optional<ValueWithError> tau_heat_s;
    std::optional<ValueWithError> tau_cool_s;
};

}  // namespace noisecal
