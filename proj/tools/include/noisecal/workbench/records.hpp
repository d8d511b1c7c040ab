#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "noisecal/synth.hpp"

namespace noisecal::workbench {

/// One psd.csv row. Joule rows carry drive power in watts, RF rows in dBm.
struct PsdRow {
    double drive;
    PsdKind kind;
    std::optional<double> f_sig_hz;
    double f_det_hz;
    double added_psd_w_per_hz;
    double rbw_hz;
    double span_hz;
    int n_averages;
};

struct TransientRow {
    double time_s;
    double temperature_k;
    bool pulse_on;
};

struct ThermometryRow {
    double joule_power_w;
    double temperature_k;
};

struct IqMetadata {
    double t_int_s;
    double f_sig_hz;
    double p_sig_dbm;
    double digitizer_scale;
};

struct IqFile {
    IqMetadata meta;
    std::vector<IqSample> samples;
};

/// Rows for a synthesized trace; `nominal_drive` replaces the drive column
/// (dBm for RF kinds, watts for Joule) so grid values are written as configured.
std::vector<PsdRow> psd_rows(const PsdTrace& trace, const std::vector<double>& nominal_drive);

/// Groups rows into traces by (kind, f_sig, f_det) in order of first appearance.
std::vector<PsdTrace> psd_traces(const std::vector<PsdRow>& rows, const std::string& source);

std::vector<TransientRow> transient_rows(const TransientTrace& trace);
TransientTrace transient_trace(const std::vector<TransientRow>& rows, const std::string& source);

IqRecord iq_record(const IqFile& file);

// CSV and sidecar IO. Readers raise SchemaError naming file, row and column;
// writers raise IoError.
void write_psd_csv(const std::filesystem::path& path, const std::vector<PsdRow>& rows);
std::vector<PsdRow> read_psd_csv(const std::filesystem::path& path);

void write_transient_csv(const std::filesystem::path& path, const std::vector<TransientRow>& rows);
std::vector<TransientRow> read_transient_csv(const std::filesystem::path& path);

void write_thermometry_csv(const std::filesystem::path& path, const std::vector<ThermometryRow>& rows);
std::vector<ThermometryRow> read_thermometry_csv(const std::filesystem::path& path);

void write_iq(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path, const IqFile& file);
IqFile read_iq(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);

/// Truncates `path` and writes `text`; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace noisecal::workbench
