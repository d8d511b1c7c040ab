#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "noisecal/workbench/commands.hpp"
#include "noisecal/workbench/errors.hpp"

namespace noisecal::workbench {

using ojson = nlohmann::ordered_json;

namespace {

const ojson& require(const ojson& obj, const char* key, const char* where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw SchemaError(std::string("report: ") + where + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// "value +/- err" or "-" when the field is absent or null.
std::string cell(const ojson* row, const char* value_key, const char* err_key, double scale = 1.0) {
    if (!row || !row->contains(value_key) || !(*row)[value_key].is_number()) return "-";
    std::string s = fixed3((*row)[value_key].get<double>() * scale);
    if (row->contains(err_key) && (*row)[err_key].is_number()) s += " +/- " + fixed3((*row)[err_key].get<double>() * scale);
    return s;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string render_report(const ojson& report) {
    const auto& att = require(report, "attenuation", "root");
    const auto& profile = require(att, "profile", "attenuation");
    const auto& readout = require(report, "readout", "root");
    if (!profile.is_array() || !readout.is_array()) throw SchemaError("report: profile and readout must be arrays");

    // Rows keyed by signal frequency, in ascending order.
    std::map<double, std::pair<const ojson*, const ojson*>> rows;
    for (const auto& p : profile) rows[require(p, "f_sig_hz", "attenuation.profile").get<double>()].first = &p;
    for (const auto& r : readout) rows[require(r, "f_sig_hz", "readout").get<double>()].second = &r;

    std::ostringstream out;
    const std::size_t w0 = 10, w1 = 18, w2 = 18, w3 = 20;
    out << pad("f_sig_GHz", w0) << pad("A_line_dB", w1) << pad("G_dB", w2) << pad("n_add_photons", w3) << "status\n";
    for (const auto& [f, pr] : rows) {
        const auto* prof = pr.first;
        const auto* rd = pr.second;
        std::string status = "ok";
        if (prof && prof->value("status", "") == "failed") {
            status = "FAILED (attenuation): " + prof->value("message", "");
        } else if (rd && rd->value("status", "") == "failed") {
            status = "FAILED (readout): " + rd->value("message", "");
        } else if (!prof) {
            status = "FAILED (attenuation): no PSD pair at this frequency";
        }
        // The readout row carries the total A_line error including the systematic part.
        const ojson* a_src = rd && rd->value("status", "") == "ok" ? rd : prof;
        out << pad(fixed3(f / 1e9), w0) << pad(cell(a_src, "a_line_db", "a_line_err_db"), w1)
            << pad(cell(rd, "gain_db", "gain_err_db"), w2) << pad(cell(rd, "n_add_photons", "n_add_err_photons"), w3)
            << status << "\n";
    }
    if (report.contains("thermal")) {
        const auto& th = report["thermal"];
        if (th.contains("power_law") && th["power_law"].value("status", "") == "ok") {
            const auto& pl = th["power_law"];
            out << "power law: Sigma*V = " << cell(&pl, "sigma_v_w_per_k_alpha", "sigma_v_err_w_per_k_alpha", 1e6)
                << " uW/K^alpha, alpha = " << cell(&pl, "alpha_exponent", "alpha_err_exponent") << "\n";
        }
        if (th.contains("transient") && th["transient"].contains("tau_heat_s")) {
            const auto& tr = th["transient"];
            out << "transient: tau_heat = " << cell(&tr, "tau_heat_s", "tau_heat_err_s", 1e3)
                << " ms, tau_cool = " << cell(&tr, "tau_cool_s", "tau_cool_err_s", 1e3) << " ms\n";
        }
    }
    if (report.contains("thermometer") && report["thermometer"].value("status", "") == "ok") {
        const auto& t = report["thermometer"];
        out << "thermometer (" << t.value("convention", "") << "): A = " << cell(&t, "attenuation_db", "") << " dB\n";
    }
    return out.str();
}

int cmd_report(const std::filesystem::path& report_path, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(report_path);
        if (!in) throw SchemaError(report_path.string() + ": cannot open report");
        ojson doc;
        try {
            doc = ojson::parse(in);
        } catch (const ojson::parse_error& e) {
            throw SchemaError(report_path.string() + ": " + e.what());
        }
        out << render_report(doc);
        return kExitOk;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const ojson::exception& e) {
        err << "error: " << report_path.string() << ": malformed report: " << e.what() << "\n";
        return kExitSchema;
    }
}

}  // namespace noisecal::workbench
