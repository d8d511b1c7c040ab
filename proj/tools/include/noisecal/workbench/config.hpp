#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noisecal/synth.hpp"

namespace noisecal::workbench {

struct GridSpec {
    double start;
    double stop;
    double step;

    std::vector<double> values() const;
};

struct PsdPair {
    double f_sig_hz;
    double f_det_hz;
};

struct PsdPlan {
    GridSpec rf_dbm;
    GridSpec joule_dbm;
    std::vector<PsdPair> pairs;
    bool reference_line = true;
    bool noise = true;
};

struct TransientPlan {
    double target_temperature_k;
    double t_on_s;
    double t_off_s;
    double t_end_s;
    double dt_s;
    double relative_noise = 0.0;
};

struct ThermometryPlan {
    GridSpec power_dbm;
    double relative_noise = 0.0;
};

struct IqPlan {
    std::vector<double> f_sig_hz;
    double p_sig_dbm;
    double t_int_s;
    std::size_t n_samples;
    double digitizer_scale = 1.0;
};

struct ThermometerInput {
    double f_ge_hz;
    double linewidth_rad_s;
    double p_in_min_dbm;
    std::string convention = "si-angular";
};

/// Estimator settings carried from the scenario config into the fit manifest.
struct FitSettings {
    double k_floor = 5.0;
    std::size_t floor_points = 16;
    int bootstrap_resamples = 500;
    // Upper window edge when no reference-line trace bounds the fit.
    double window_max_dbm = -5.0;
    double contamination_at_dbm = -5.0;
    double a_line_systematic_db = 0.5;
    double transient_skip_fraction = 0.0;
};

struct SimulateConfig {
    Scenario scenario;
    PsdPlan psd;
    std::optional<TransientPlan> transient;
    std::optional<ThermometryPlan> thermometry;
    std::optional<IqPlan> iq;
    std::optional<ThermometerInput> thermometer;
    FitSettings fit;
    // Effective config after command-line overrides, used for the provenance hash.
    nlohmann::json effective;
};

struct IqFiles {
    std::string samples_file;
    std::string metadata_file;
};

struct Manifest {
    std::string psd_file;
    std::optional<std::string> transient_file;
    std::optional<std::string> thermometry_file;
    std::vector<IqFiles> iq;
    double a_att_db;
    double bath_temperature_k;
    std::uint64_t seed = 0;
    FitSettings fit;
    std::optional<ThermometerInput> thermometer;
    // Hash of the simulate config that produced the records, when known.
    std::optional<std::string> source_config_hash;
    // Record paths are resolved against this directory.
    std::filesystem::path base_dir;
    nlohmann::json effective;
};

/// Reads a JSON document; SchemaError on IO or syntax problems.
nlohmann::json load_json(const std::filesystem::path& path);

/// Strict parsers: unknown keys and missing or mistyped fields raise SchemaError
/// with the dotted key path. The document must hold exactly one of "scenario" or "manifest".
SimulateConfig parse_simulate_config(const nlohmann::json& doc, const std::string& source);
Manifest parse_manifest(const nlohmann::json& doc, const std::string& source);

nlohmann::json manifest_to_json(const Manifest& m);

/// FNV-1a of the canonical (key-sorted, shortest-number) serialization.
std::string config_hash(const nlohmann::json& doc);

}  // namespace noisecal::workbench
