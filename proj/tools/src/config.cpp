#include "noisecal/workbench/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "noisecal/errors.hpp"
#include "noisecal/readout.hpp"
#include "noisecal/rng.hpp"
#include "noisecal/workbench/errors.hpp"
#include "noisecal/workbench/format.hpp"

namespace noisecal::workbench {

using nlohmann::json;

namespace {

// Tracks which keys of a JSON object were consumed so leftovers can be reported.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path, const std::string& source) : j_(j), path_(std::move(path)), source_(source) {
        if (!j_.is_object()) fail("expected an object");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError(source_ + ": " + (path_.empty() ? "<root>" : path_) + ": " + what);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        if (!j_.contains(key)) fail("missing required key '" + key + "'");
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) fail("'" + key + "' must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail("'" + key + "' must be finite");
        return d;
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::optional<double> optional_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    long long integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            fail("'" + key + "' must be a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail("'" + key + "' must be true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) fail("'" + key + "' must be a string");
        return v.get<std::string>();
    }

    ObjectReader object(const std::string& key) { return ObjectReader(raw(key), child(key), source_); }

    const json& array(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail("'" + key + "' must be an array");
        return v;
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string index(const std::string& key, std::size_t i) const { return child(key) + "[" + std::to_string(i) + "]"; }
    const std::string& source() const { return source_; }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!used_.count(k)) fail("unknown key '" + k + "'");
        }
    }

private:
    const json& j_;
    std::string path_;
    const std::string& source_;
    std::set<std::string> used_;
};

GridSpec parse_grid(ObjectReader r) {
    GridSpec g{r.number("start"), r.number("stop"), r.number("step")};
    r.finish();
    if (!(g.step > 0.0) || g.stop < g.start) r.fail("grid needs step > 0 and stop >= start");
    if ((g.stop - g.start) / g.step > 1e7) r.fail("grid has too many points");
    return g;
}

ThermalModel parse_film(ObjectReader& r) {
    const double alpha = r.number("alpha");
    const Temperature t_bath(r.number("bath_temperature_k"));
    const double gamma = r.number_or("gamma_j_per_m3_k2", 220.0);
    const bool has_volume = r.has("volume_m3");
    const bool has_sigma_v = r.has("sigma_v_w_per_k_alpha");
    if (has_volume == has_sigma_v) r.fail("give exactly one of 'volume_m3' or 'sigma_v_w_per_k_alpha'");
    if (r.has("sigma_w_per_m3_k_alpha")) {
        const double sigma = r.number("sigma_w_per_m3_k_alpha");
        const double volume = has_volume ? r.number("volume_m3") : r.number("sigma_v_w_per_k_alpha") / sigma;
        return ThermalModel(sigma, alpha, volume, t_bath, gamma);
    }
    if (has_volume) r.fail("'volume_m3' needs 'sigma_w_per_m3_k_alpha'");
    // Lumped body: only the product sigma * V is known.
    return ThermalModel(r.number("sigma_v_w_per_k_alpha"), alpha, 1.0, t_bath, gamma);
}

TPadNetwork parse_pad(ObjectReader r) {
    const double z0 = r.number_or("z0_ohm", 50.0);
    TPadNetwork pad(1.0, 1.0, z0);
    if (r.has("attenuation_db")) {
        if (r.has("r_series_ohm") || r.has("r_shunt_ohm")) r.fail("give either 'attenuation_db' or resistor values");
        pad = tpad_from_attenuation(r.number("attenuation_db"), z0);
    } else {
        pad = TPadNetwork(r.number("r_series_ohm"), r.number("r_shunt_ohm"), z0);
    }
    r.finish();
    return pad;
}

ChainSpec parse_chain(ObjectReader& parent, const std::string& key) {
    const json& arr = parent.array(key);
    std::vector<ChainStage> stages;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        ObjectReader s(arr[i], parent.index(key, i), parent.source());
        if (s.has("gain_db")) {
            stages.emplace_back(AmplifierStage(PowerRatio::from_db(s.number("gain_db")), s.number("added_photons")));
        } else {
            stages.emplace_back(
                AttenuatorStage(PowerRatio::from_db(s.number("attenuation_db")), Temperature(s.number("temperature_k"))));
        }
        s.finish();
    }
    if (stages.empty()) parent.fail("'" + key + "' must list at least one stage");
    return ChainSpec(std::move(stages));
}

Scenario parse_scenario(ObjectReader r, std::uint64_t seed) {
    ChainSpec chain = parse_chain(r, "drive_chain");

    ObjectReader ns = r.object("noise_source");
    ThermalModel film = parse_film(ns);
    TPadNetwork pad = parse_pad(ns.object("pad"));
    const double r_att = ns.number_or("r_att_ohm", 67.0);
    ns.finish();

    ObjectReader ro = r.object("readout");
    const auto gain = PowerRatio::from_db(ro.number("gain_db"));
    const double added = ro.number("added_photons");
    ro.finish();

    std::optional<BulkheadModel> bulkhead;
    if (r.has("bulkhead")) {
        ObjectReader b = r.object("bulkhead");
        ThermalModel body = parse_film(b);
        const auto att = PowerRatio::from_db(b.number("attenuation_db"));
        const bool contaminates = b.boolean_or("contaminates_rf", false);
        b.finish();
        bulkhead = BulkheadModel{body, att, contaminates};
    }

    PsdAcquisition acq;
    if (r.has("acquisition")) {
        ObjectReader a = r.object("acquisition");
        acq.rbw_hz = a.number_or("rbw_hz", acq.rbw_hz);
        acq.span_hz = a.number_or("span_hz", acq.span_hz);
        acq.n_averages = a.has("n_averages") ? static_cast<int>(a.integer("n_averages")) : acq.n_averages;
        acq.averaging_time_s = a.number_or("averaging_time_s", acq.averaging_time_s);
        a.finish();
    }

    const double offset = r.number_or("base_occupation_offset_photons", 0.0);
    const double t_source = r.number_or("source_temperature_k", 300.0);
    r.finish();

    Scenario sc{std::move(chain), NoiseSource{film, pad, r_att}, gain, added, Occupation(offset),
                Temperature(t_source), bulkhead, acq, seed};
    sc.validate();
    return sc;
}

std::vector<double> parse_number_list(ObjectReader& r, const std::string& key) {
    const json& arr = r.array(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) r.fail("'" + key + "' entries must be numbers");
        out.push_back(arr[i].get<double>());
    }
    if (out.empty()) r.fail("'" + key + "' must not be empty");
    return out;
}

FitSettings parse_fit_settings(ObjectReader r) {
    FitSettings f;
    f.k_floor = r.number_or("k_floor", f.k_floor);
    if (r.has("floor_points")) {
        const auto n = r.integer("floor_points");
        if (n < 3) r.fail("'floor_points' must be at least 3");
        f.floor_points = static_cast<std::size_t>(n);
    }
    if (r.has("bootstrap_resamples")) f.bootstrap_resamples = static_cast<int>(r.integer("bootstrap_resamples"));
    f.window_max_dbm = r.number_or("window_max_dbm", f.window_max_dbm);
    f.contamination_at_dbm = r.number_or("contamination_at_dbm", f.contamination_at_dbm);
    f.a_line_systematic_db = r.number_or("a_line_systematic_db", f.a_line_systematic_db);
    f.transient_skip_fraction = r.number_or("transient_skip_fraction", f.transient_skip_fraction);
    r.finish();
    if (!(f.k_floor > 0.0) || f.a_line_systematic_db < 0.0 || f.transient_skip_fraction < 0.0 ||
        f.transient_skip_fraction >= 1.0) {
        r.fail("fit settings out of range");
    }
    return f;
}

ThermometerInput parse_thermometer(ObjectReader r) {
    ThermometerInput t{r.number("f_ge_hz"), r.number("linewidth_rad_s"), r.number("p_in_min_dbm")};
    if (r.has("convention")) t.convention = r.string("convention");
    r.finish();
    try {
        (void)thermometer_convention_from_string(t.convention);
    } catch (const UsageError& e) {
        r.fail(e.what());
    }
    return t;
}

json fit_settings_json(const FitSettings& f) {
    return json{{"k_floor", f.k_floor},
                {"floor_points", f.floor_points},
                {"bootstrap_resamples", f.bootstrap_resamples},
                {"window_max_dbm", f.window_max_dbm},
                {"contamination_at_dbm", f.contamination_at_dbm},
                {"a_line_systematic_db", f.a_line_systematic_db},
                {"transient_skip_fraction", f.transient_skip_fraction}};
}

json thermometer_json(const ThermometerInput& t) {
    return json{{"f_ge_hz", t.f_ge_hz},
                {"linewidth_rad_s", t.linewidth_rad_s},
                {"p_in_min_dbm", t.p_in_min_dbm},
                {"convention", t.convention}};
}

// Canonical text: object keys sorted (nlohmann::json uses std::map), numbers in
// shortest round-trip form, no whitespace.
void canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += json(k).dump();
                out += ':';
                canonical(v, out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                canonical(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
        case json::value_t::number_float:
            // 1, 1.0 and 1e0 denote the same physical value.
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

}  // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 0.5));
    for (long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string() + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": invalid JSON: " + e.what());
    }
}

SimulateConfig parse_simulate_config(const json& doc, const std::string& source) {
    ObjectReader root(doc, "", source);
    if (root.has("manifest")) root.fail("a simulate config holds 'scenario', not 'manifest'");
    const std::uint64_t seed = root.unsigned_integer("seed");
    try {
        SimulateConfig cfg{parse_scenario(root.object("scenario"), seed), {}, {}, {}, {}, {}, {}, doc};

        ObjectReader meas = root.object("measurements");
        {
            ObjectReader p = meas.object("psd");
            cfg.psd.rf_dbm = parse_grid(p.object("rf_drive_dbm"));
            cfg.psd.joule_dbm = parse_grid(p.object("joule_drive_dbm"));
            const json& pairs = p.array("pairs");
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                ObjectReader pr(pairs[i], p.index("pairs", i), source);
                cfg.psd.pairs.push_back({pr.number("f_sig_hz"), pr.number("f_det_hz")});
                pr.finish();
                if (!(cfg.psd.pairs.back().f_sig_hz > 0.0) || !(cfg.psd.pairs.back().f_det_hz > 0.0)) {
                    pr.fail("frequencies must be positive");
                }
            }
            if (cfg.psd.pairs.empty()) p.fail("'pairs' must not be empty");
            cfg.psd.reference_line = p.boolean_or("reference_line", true);
            cfg.psd.noise = p.boolean_or("noise", true);
            p.finish();
        }
        if (meas.has("transient")) {
            ObjectReader t = meas.object("transient");
            cfg.transient = TransientPlan{t.number("target_temperature_k"), t.number("t_on_s"), t.number("t_off_s"),
                                          t.number("t_end_s"), t.number("dt_s"), t.number_or("relative_noise", 0.0)};
            t.finish();
            const auto& tp = *cfg.transient;
            if (!(tp.dt_s > 0.0) || !(tp.t_on_s >= 0.0) || !(tp.t_off_s > tp.t_on_s) || !(tp.t_end_s >= tp.t_off_s)) {
                t.fail("need dt > 0 and 0 <= t_on < t_off <= t_end");
            }
        }
        if (meas.has("thermometry")) {
            ObjectReader t = meas.object("thermometry");
            cfg.thermometry = ThermometryPlan{parse_grid(t.object("joule_power_dbm")), t.number_or("relative_noise", 0.0)};
            t.finish();
        }
        if (meas.has("iq")) {
            ObjectReader q = meas.object("iq");
            IqPlan plan{parse_number_list(q, "f_sig_hz"), q.number("p_sig_dbm"), q.number("t_int_s"), 0,
                        q.number_or("digitizer_scale", 1.0)};
            const auto n = q.integer("n_samples");
            if (n < 2) q.fail("'n_samples' must be at least 2");
            plan.n_samples = static_cast<std::size_t>(n);
            q.finish();
            cfg.iq = plan;
        }
        meas.finish();

        if (root.has("fit")) cfg.fit = parse_fit_settings(root.object("fit"));
        if (root.has("thermometer")) cfg.thermometer = parse_thermometer(root.object("thermometer"));
        root.finish();
        return cfg;
    } catch (const DomainError& e) {
        throw SchemaError(source + ": invalid scenario: " + e.what());
    } catch (const UsageError& e) {
        throw SchemaError(source + ": invalid scenario: " + e.what());
    }
}

Manifest parse_manifest(const json& doc, const std::string& source) {
    ObjectReader root(doc, "", source);
    if (root.has("scenario")) root.fail("a fit config holds 'manifest', not 'scenario'");
    ObjectReader m = root.object("manifest");
    root.finish();

    Manifest out;
    out.psd_file = m.string("psd_file");
    if (m.has("transient_file")) out.transient_file = m.string("transient_file");
    if (m.has("thermometry_file")) out.thermometry_file = m.string("thermometry_file");
    if (m.has("iq")) {
        const json& arr = m.array("iq");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            ObjectReader e(arr[i], m.index("iq", i), source);
            out.iq.push_back({e.string("samples_file"), e.string("metadata_file")});
            e.finish();
        }
    }
    out.a_att_db = m.number("a_att_db");
    if (!(out.a_att_db < 0.0)) m.fail("'a_att_db' must be negative");
    out.bath_temperature_k = m.number("bath_temperature_k");
    if (!(out.bath_temperature_k > 0.0)) m.fail("'bath_temperature_k' must be positive");
    out.seed = m.unsigned_integer("seed");
    if (m.has("fit")) out.fit = parse_fit_settings(m.object("fit"));
    if (m.has("thermometer")) out.thermometer = parse_thermometer(m.object("thermometer"));
    if (m.has("source_config_hash_fnv1a64")) out.source_config_hash = m.string("source_config_hash_fnv1a64");
    m.finish();
    out.effective = doc;
    return out;
}

json manifest_to_json(const Manifest& m) {
    json body{{"psd_file", m.psd_file},
              {"a_att_db", m.a_att_db},
              {"bath_temperature_k", m.bath_temperature_k},
              {"seed", m.seed},
              {"fit", fit_settings_json(m.fit)}};
    if (m.transient_file) body["transient_file"] = *m.transient_file;
    if (m.thermometry_file) body["thermometry_file"] = *m.thermometry_file;
    if (!m.iq.empty()) {
        json arr = json::array();
        for (const auto& f : m.iq) arr.push_back({{"samples_file", f.samples_file}, {"metadata_file", f.metadata_file}});
        body["iq"] = arr;
    }
    if (m.thermometer) body["thermometer"] = thermometer_json(*m.thermometer);
    if (m.source_config_hash) body["source_config_hash_fnv1a64"] = *m.source_config_hash;
    return json{{"manifest", body}};
}

std::string config_hash(const json& doc) {
    std::string text;
    canonical(doc, text);
    return hex64(fnv1a_64(text));
}

}  // namespace noisecal::workbench
