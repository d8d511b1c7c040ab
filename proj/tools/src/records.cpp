#include "noisecal/workbench/records.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "noisecal/errors.hpp"
#include "noisecal/workbench/errors.hpp"
#include "noisecal/workbench/format.hpp"

namespace noisecal::workbench {

namespace {

const char* const kPsdHeader =
    "drive_power_dbm_or_w,kind,f_sig_hz,f_det_hz,added_psd_w_per_hz,rbw_hz,span_hz,n_averages";
const char* const kTransientHeader = "time_s,temperature_k,pulse_on";
const char* const kThermometryHeader = "joule_power_w,temperature_k";
const char* const kIqHeader = "i,q";

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Line-oriented CSV reader that checks the header and reports 1-based row/column positions.
class CsvReader {
public:
    CsvReader(const std::filesystem::path& path, const char* header) : source_(path.string()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw SchemaError(source_ + ": cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        text_ = ss.str();
        std::string_view first;
        if (!next_line(first)) throw SchemaError(source_ + ": empty file (expected header '" + header + "')");
        if (first != header) throw SchemaError(source_ + ": row 1: header must be '" + std::string(header) + "'");
        n_cols_ = split(header).size();
    }

    // Next data row split into fields; false at end of file.
    bool next(std::vector<std::string_view>& fields) {
        std::string_view line;
        while (next_line(line)) {
            if (line.empty()) continue;
            fields = split(line);
            if (fields.size() != n_cols_) {
                fail(0, "expected " + std::to_string(n_cols_) + " columns, found " + std::to_string(fields.size()));
            }
            ++data_rows_;
            return true;
        }
        return false;
    }

    double number(const std::vector<std::string_view>& f, std::size_t col) const {
        double v = 0.0;
        if (!parse_double(f[col], v)) fail(col + 1, "'" + std::string(f[col]) + "' is not a finite number");
        return v;
    }

    long long integer(const std::vector<std::string_view>& f, std::size_t col) const {
        long long v = 0;
        if (!parse_int(f[col], v)) fail(col + 1, "'" + std::string(f[col]) + "' is not an integer");
        return v;
    }

    [[noreturn]] void fail(std::size_t col, const std::string& what) const {
        std::string loc = source_ + ": row " + std::to_string(row_);
        if (col > 0) loc += ", column " + std::to_string(col);
        throw SchemaError(loc + ": " + what);
    }

    void require_rows() const {
        if (data_rows_ == 0) throw SchemaError(source_ + ": no data rows");
    }

    const std::string& source() const { return source_; }

private:
    bool next_line(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        auto end = text_.find('\n', pos_);
        if (end == std::string::npos) end = text_.size();
        line = std::string_view(text_).substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = end + 1;
        ++row_;
        return true;
    }

    std::string source_;
    std::string text_;
    std::size_t pos_ = 0;
    std::size_t row_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t data_rows_ = 0;
};

class CsvWriter {
public:
    explicit CsvWriter(const char* header) { out_ << header << '\n'; }

    CsvWriter& field(double v) { return raw(format_double(v)); }
    CsvWriter& field(long long v) { return raw(std::to_string(v)); }
    CsvWriter& raw(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }
    void end_row() {
        out_ << '\n';
        first_ = true;
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool first_ = true;
};

bool same_group(const PsdRow& a, const PsdRow& b) {
    return a.kind == b.kind && a.f_sig_hz == b.f_sig_hz && a.f_det_hz == b.f_det_hz;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError(path.string() + ": write failed");
}

std::vector<PsdRow> psd_rows(const PsdTrace& trace, const std::vector<double>& nominal_drive) {
    if (nominal_drive.size() != trace.drive_axis.size()) throw UsageError("psd_rows: drive column length mismatch");
    std::vector<PsdRow> rows;
    rows.reserve(trace.drive_axis.size());
    for (std::size_t i = 0; i < trace.drive_axis.size(); ++i) {
        rows.push_back(PsdRow{nominal_drive[i], trace.kind,
                              trace.f_sig ? std::optional<double>(trace.f_sig->hz()) : std::nullopt, trace.f_det.hz(),
                              trace.added_psd[i], trace.rbw_hz, trace.span_hz, trace.n_averages});
    }
    return rows;
}

std::vector<PsdTrace> psd_traces(const std::vector<PsdRow>& rows, const std::string& source) {
    std::vector<PsdTrace> out;
    std::vector<const PsdRow*> heads;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::size_t g = 0;
        while (g < heads.size() && !same_group(*heads[g], row)) ++g;
        const std::string where = source + ": row " + std::to_string(r + 2) + ": ";
        try {
            const PowerLevel p = row.kind == PsdKind::Joule ? PowerLevel(row.drive) : PowerLevel::from_dbm(row.drive);
            if (g == heads.size()) {
                heads.push_back(&row);
                out.push_back(PsdTrace{row.kind, {}, {}, Frequency(row.f_det_hz),
                                       row.f_sig_hz ? std::optional<Frequency>(Frequency(*row.f_sig_hz)) : std::nullopt,
                                       row.rbw_hz, row.span_hz, row.n_averages});
            }
            auto& tr = out[g];
            if (row.rbw_hz != tr.rbw_hz || row.span_hz != tr.span_hz || row.n_averages != tr.n_averages) {
                throw SchemaError(where + "acquisition settings differ within one trace");
            }
            if (!tr.drive_axis.empty() && !(p > tr.drive_axis.back())) {
                throw SchemaError(where + "drive power must increase within a trace");
            }
            tr.drive_axis.push_back(p);
            tr.added_psd.push_back(row.added_psd_w_per_hz);
        } catch (const DomainError& e) {
            throw SchemaError(where + e.what());
        }
    }
    for (auto& tr : out) {
        try {
            tr.validate();
        } catch (const std::exception& e) {
            throw SchemaError(source + ": " + e.what());
        }
    }
    return out;
}

std::vector<TransientRow> transient_rows(const TransientTrace& trace) {
    std::vector<TransientRow> rows;
    rows.reserve(trace.time_s.size());
    for (std::size_t i = 0; i < trace.time_s.size(); ++i) {
        const double t = trace.time_s[i];
        rows.push_back({t, trace.temperature[i].kelvin(), t >= trace.t_on_s && t < trace.t_off_s});
    }
    return rows;
}

TransientTrace transient_trace(const std::vector<TransientRow>& rows, const std::string& source) {
    TransientTrace tr{{}, {}, 0.0, 0.0};
    std::optional<double> t_on, t_off;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = source + ": row " + std::to_string(i + 2) + ": ";
        if (!tr.time_s.empty() && !(r.time_s > tr.time_s.back())) throw SchemaError(where + "time must increase");
        if (!(r.temperature_k > 0.0)) throw SchemaError(where + "temperature must be positive");
        if (r.pulse_on && !t_on) t_on = r.time_s;
        if (r.pulse_on && t_off) throw SchemaError(where + "only one pulse per transient is supported");
        if (!r.pulse_on && t_on && !t_off) t_off = r.time_s;
        tr.time_s.push_back(r.time_s);
        tr.temperature.emplace_back(r.temperature_k);
    }
    if (!t_on) throw SchemaError(source + ": no row has pulse_on = 1");
    tr.t_on_s = *t_on;
    tr.t_off_s = t_off ? *t_off : tr.time_s.back();
    return tr;
}

IqRecord iq_record(const IqFile& file) {
    IqRecord rec{file.samples, file.meta.t_int_s, Frequency(file.meta.f_sig_hz),
                 PowerLevel::from_dbm(file.meta.p_sig_dbm), file.meta.digitizer_scale, {}};
    if (rec.samples.size() < 100) {
        rec.diagnostics.push_back("fewer than 100 IQ samples: moment estimates are unreliable");
    }
    return rec;
}

void write_psd_csv(const std::filesystem::path& path, const std::vector<PsdRow>& rows) {
    CsvWriter w(kPsdHeader);
    for (const auto& r : rows) {
        w.field(r.drive).raw(std::string(to_string(r.kind)));
        if (r.f_sig_hz) {
            w.field(*r.f_sig_hz);
        } else {
            w.raw("");
        }
        w.field(r.f_det_hz).field(r.added_psd_w_per_hz).field(r.rbw_hz).field(r.span_hz);
        w.field(static_cast<long long>(r.n_averages));
        w.end_row();
    }
    write_text(path, w.str());
}

std::vector<PsdRow> read_psd_csv(const std::filesystem::path& path) {
    CsvReader in(path, kPsdHeader);
    std::vector<PsdRow> rows;
    std::vector<std::string_view> f;
    while (in.next(f)) {
        PsdRow r{};
        r.drive = in.number(f, 0);
        try {
            r.kind = psd_kind_from_string(f[1]);
        } catch (const UsageError&) {
            in.fail(2, "unknown kind '" + std::string(f[1]) + "' (expected joule, rf or rf_reference)");
        }
        if (r.kind == PsdKind::Joule) {
            if (!f[2].empty()) in.fail(3, "joule rows must leave f_sig_hz empty");
            if (r.drive < 0.0) in.fail(1, "joule drive power in watts must be non-negative");
        } else {
            if (f[2].empty()) in.fail(3, "rf rows need f_sig_hz");
            r.f_sig_hz = in.number(f, 2);
            if (!(*r.f_sig_hz > 0.0)) in.fail(3, "frequency must be positive");
        }
        r.f_det_hz = in.number(f, 3);
        if (!(r.f_det_hz > 0.0)) in.fail(4, "frequency must be positive");
        r.added_psd_w_per_hz = in.number(f, 4);
        r.rbw_hz = in.number(f, 5);
        r.span_hz = in.number(f, 6);
        const auto n = in.integer(f, 7);
        if (n < 1 || n > 1000000000) in.fail(8, "n_averages must be a positive integer");
        r.n_averages = static_cast<int>(n);
        rows.push_back(r);
    }
    in.require_rows();
    return rows;
}

void write_transient_csv(const std::filesystem::path& path, const std::vector<TransientRow>& rows) {
    CsvWriter w(kTransientHeader);
    for (const auto& r : rows) {
        w.field(r.time_s).field(r.temperature_k).field(static_cast<long long>(r.pulse_on ? 1 : 0));
        w.end_row();
    }
    write_text(path, w.str());
}

std::vector<TransientRow> read_transient_csv(const std::filesystem::path& path) {
    CsvReader in(path, kTransientHeader);
    std::vector<TransientRow> rows;
    std::vector<std::string_view> f;
    while (in.next(f)) {
        TransientRow r{in.number(f, 0), in.number(f, 1), false};
        const auto on = in.integer(f, 2);
        if (on != 0 && on != 1) in.fail(3, "pulse_on must be 0 or 1");
        r.pulse_on = on == 1;
        rows.push_back(r);
    }
    in.require_rows();
    return rows;
}

void write_thermometry_csv(const std::filesystem::path& path, const std::vector<ThermometryRow>& rows) {
    CsvWriter w(kThermometryHeader);
    for (const auto& r : rows) {
        w.field(r.joule_power_w).field(r.temperature_k);
        w.end_row();
    }
    write_text(path, w.str());
}

std::vector<ThermometryRow> read_thermometry_csv(const std::filesystem::path& path) {
    CsvReader in(path, kThermometryHeader);
    std::vector<ThermometryRow> rows;
    std::vector<std::string_view> f;
    while (in.next(f)) {
        ThermometryRow r{in.number(f, 0), in.number(f, 1)};
        if (r.joule_power_w < 0.0) in.fail(1, "power must be non-negative");
        if (!(r.temperature_k > 0.0)) in.fail(2, "temperature must be positive");
        rows.push_back(r);
    }
    in.require_rows();
    return rows;
}

void write_iq(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path, const IqFile& file) {
    CsvWriter w(kIqHeader);
    for (const auto& s : file.samples) {
        w.field(s.i).field(s.q);
        w.end_row();
    }
    write_text(csv_path, w.str());
    nlohmann::ordered_json meta{{"t_int_s", file.meta.t_int_s},
                                {"f_sig_hz", file.meta.f_sig_hz},
                                {"p_sig_dbm", file.meta.p_sig_dbm},
                                {"digitizer_scale", file.meta.digitizer_scale}};
    write_text(meta_path, meta.dump(2) + "\n");
}

IqFile read_iq(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
    IqFile file{};
    {
        std::ifstream in(meta_path, std::ios::binary);
        if (!in) throw SchemaError(meta_path.string() + ": cannot open file");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw SchemaError(meta_path.string() + ": invalid JSON: " + e.what());
        }
        if (!j.is_object()) throw SchemaError(meta_path.string() + ": expected an object");
        auto num = [&](const char* key) {
            if (!j.contains(key) || !j[key].is_number()) {
                throw SchemaError(meta_path.string() + ": missing numeric key '" + key + "'");
            }
            return j[key].get<double>();
        };
        for (const auto& [k, v] : j.items()) {
            if (k != "t_int_s" && k != "f_sig_hz" && k != "p_sig_dbm" && k != "digitizer_scale") {
                throw SchemaError(meta_path.string() + ": unknown key '" + k + "'");
            }
        }
        file.meta = IqMetadata{num("t_int_s"), num("f_sig_hz"), num("p_sig_dbm"), num("digitizer_scale")};
        if (!(file.meta.t_int_s > 0.0) || !(file.meta.f_sig_hz > 0.0) || !(file.meta.digitizer_scale > 0.0)) {
            throw SchemaError(meta_path.string() + ": t_int_s, f_sig_hz and digitizer_scale must be positive");
        }
    }
    CsvReader in(csv_path, kIqHeader);
    std::vector<std::string_view> f;
    while (in.next(f)) file.samples.push_back({in.number(f, 0), in.number(f, 1)});
    in.require_rows();
    if (file.samples.size() < 2) throw SchemaError(csv_path.string() + ": at least two samples required");
    return file;
}

}  // namespace noisecal::workbench
