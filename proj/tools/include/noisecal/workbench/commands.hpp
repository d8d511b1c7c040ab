#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "noisecal/workbench/config.hpp"

namespace noisecal::workbench {

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::optional<double> window_min_dbm;
    std::optional<double> window_max_dbm;
    std::optional<std::string> convention;
    std::filesystem::path out_dir = ".";
    unsigned jobs = 1;
};

/// Synthesizes every configured record into out_dir and writes manifest.json.
/// Output bytes depend only on the config and seed, never on `jobs`.
int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Runs window selection, shift fits, the attenuation profile, thermal fits and
/// the IQ readout analysis on a manifest, writing report.json into out_dir.
int cmd_fit(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Prints the per-frequency calibration table of a report document.
int cmd_report(const std::filesystem::path& report_path, std::ostream& out, std::ostream& err);

/// In-memory fit on an already parsed manifest. `exit_code` is 0 or kExitFitFailure.
struct FitOutcome {
    nlohmann::ordered_json report;
    int exit_code;
};
FitOutcome run_fit(const Manifest& manifest, const CommandOptions& opts);

/// Renders the table printed by cmd_report; SchemaError on a malformed document.
std::string render_report(const nlohmann::ordered_json& report);

std::string tool_version();

}  // namespace noisecal::workbench
