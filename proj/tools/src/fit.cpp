#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "noisecal/attenuation.hpp"
#include "noisecal/errors.hpp"
#include "noisecal/photons.hpp"
#include "noisecal/readout.hpp"
#include "noisecal/thermal_fits.hpp"
#include "noisecal/workbench/commands.hpp"
#include "noisecal/workbench/errors.hpp"
#include "noisecal/workbench/format.hpp"
#include "noisecal/workbench/records.hpp"

#ifndef NOISECAL_VERSION
#define NOISECAL_VERSION "0.0.0"
#endif

namespace noisecal::workbench {

using ojson = nlohmann::ordered_json;

std::string tool_version() { return NOISECAL_VERSION; }

namespace {

// JSON has no NaN or infinity; undefined values are written as null.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson opt_num(const std::optional<double>& v) { return v ? num(*v) : ojson(nullptr); }

struct StageLog {
    ojson entries = ojson::array();
    bool failed = false;

    void ok(const std::string& stage) { entries.push_back({{"stage", stage}, {"status", "ok"}}); }
    void fail(const std::string& stage, const std::string& message) {
        entries.push_back({{"stage", stage}, {"status", "failed"}, {"message", message}});
        failed = true;
    }
};

struct PairPlan {
    const PsdTrace* rf = nullptr;
    const PsdTrace* joule = nullptr;
    const PsdTrace* reference = nullptr;
    double floor_std = 0.0;
    std::optional<FitWindow> window;
    std::optional<FitWindow> window_no_reference;
    std::optional<std::string> error;
};

FitWindow apply_cli_window(FitWindow w, const CommandOptions& opts) {
    if (opts.window_min_dbm) w.p_lo_dbm = *opts.window_min_dbm;
    if (opts.window_max_dbm) w.p_hi_dbm = *opts.window_max_dbm;
    return w;
}

struct ProfilePoint {
    double f_sig_hz;
    double a_line_db;
    double err_db;
};

// A_line at f by linear interpolation in frequency over the successful profile points.
std::optional<ProfilePoint> profile_at(const std::vector<ProfilePoint>& prof, double f, std::string& note) {
    if (prof.empty()) return std::nullopt;
    if (f <= prof.front().f_sig_hz || f >= prof.back().f_sig_hz) {
        const auto& p = f <= prof.front().f_sig_hz ? prof.front() : prof.back();
        if (p.f_sig_hz != f) note = "A_line extrapolated from the nearest profile frequency";
        return ProfilePoint{f, p.a_line_db, p.err_db};
    }
    for (std::size_t k = 1; k < prof.size(); ++k) {
        if (f <= prof[k].f_sig_hz) {
            const auto& a = prof[k - 1];
            const auto& b = prof[k];
            if (b.f_sig_hz == f) return b;
            const double w = (f - a.f_sig_hz) / (b.f_sig_hz - a.f_sig_hz);
            note = "A_line interpolated between profile frequencies";
            return ProfilePoint{f, a.a_line_db + w * (b.a_line_db - a.a_line_db), std::max(a.err_db, b.err_db)};
        }
    }
    return std::nullopt;
}

ojson run_attenuation(const Manifest& m, const CommandOptions& opts, const std::vector<PsdTrace>& traces,
                      std::vector<ProfilePoint>& profile_out, StageLog& log) {
    const PowerRatio a_att = PowerRatio::from_db(m.a_att_db);
    std::vector<PairPlan> plans;
    for (const auto& tr : traces) {
        if (tr.kind != PsdKind::Rf) continue;
        PairPlan p;
        p.rf = &tr;
        for (const auto& other : traces) {
            if (other.kind == PsdKind::Joule && other.f_det == tr.f_det && !p.joule) p.joule = &other;
            if (other.kind == PsdKind::RfReference && other.f_det == tr.f_det && other.f_sig == tr.f_sig && !p.reference) {
                p.reference = &other;
            }
        }
        try {
            if (!p.joule) throw UsageError("no Joule trace at this detection frequency");
            p.floor_std = estimate_floor_std(tr, m.fit.floor_points);
            const WindowOptions wo{m.fit.k_floor};
            p.window = apply_cli_window(select_fit_window(tr, p.floor_std, p.reference, m.fit.window_max_dbm, wo), opts);
            if (p.reference) {
                p.window_no_reference =
                    apply_cli_window(select_fit_window(tr, p.floor_std, nullptr, m.fit.window_max_dbm, wo), opts);
            }
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        plans.push_back(p);
    }
    if (plans.empty()) throw SchemaError(m.psd_file + ": no rf traces to fit");

    // Pairs that failed before fitting are excluded from the profile call and re-inserted after.
    std::vector<ProfileInput> inputs, inputs_noref;
    std::vector<std::size_t> input_of(plans.size(), SIZE_MAX), noref_of(plans.size(), SIZE_MAX);
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const auto& p = plans[i];
        if (p.error) continue;
        input_of[i] = inputs.size();
        inputs.push_back({*p.joule, *p.rf, *p.window});
        if (p.window_no_reference) {
            noref_of[i] = inputs_noref.size();
            inputs_noref.push_back({*p.joule, *p.rf, *p.window_no_reference});
        }
    }
    const std::uint64_t seed = opts.seed.value_or(m.seed);
    const ProfileOptions popts{ShiftFitOptions{m.fit.bootstrap_resamples, seed}, opts.jobs};
    const auto entries = attenuation_profile(inputs, a_att, popts);
    // The comparison fits only need the point estimate.
    const auto entries_noref = attenuation_profile(inputs_noref, a_att, {ShiftFitOptions{0, seed}, opts.jobs});

    ojson pairs = ojson::array();
    std::map<double, std::vector<const ProfileEntry*>> by_freq;
    std::map<double, std::string> failures_by_freq;
    std::map<double, std::vector<double>> noref_by_freq;
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const auto& p = plans[i];
        ojson row;
        row["f_sig_hz"] = p.rf->f_sig->hz();
        row["f_det_hz"] = p.rf->f_det.hz();
        row["reference_line_used"] = p.reference != nullptr;
        std::optional<std::string> error = p.error;
        const ProfileEntry* e = input_of[i] != SIZE_MAX ? &entries[input_of[i]] : nullptr;
        if (e && e->error) error = e->error;
        if (error) {
            row["status"] = "failed";
            row["message"] = *error;
            failures_by_freq.emplace(p.rf->f_sig->hz(), *error);
            pairs.push_back(row);
            continue;
        }
        row["status"] = "ok";
        row["floor_std_w_per_hz"] = num(p.floor_std);
        row["window_lo_dbm"] = p.window->p_lo_dbm;
        row["window_hi_dbm"] = p.window->p_hi_dbm;
        row["overlap_points_count"] = e->overlap_count;
        row["a_line_db"] = num(e->a_line_db);
        row["a_line_err_db"] = num(e->a_line_err_db);
        row["a_total_db"] = num(e->a_line_db + 10.0 * std::log10(1.0 - a_att.linear()));
        row["band_discrepancy_db"] = opt_num(e->discrepancy_db);
        if (noref_of[i] != SIZE_MAX) {
            const auto& n = entries_noref[noref_of[i]];
            row["window_no_reference_hi_dbm"] = p.window_no_reference->p_hi_dbm;
            if (n.error) {
                row["a_line_no_reference_db"] = nullptr;
                row["reference_discrepancy_db"] = nullptr;
            } else {
                row["a_line_no_reference_db"] = num(n.a_line_db);
                noref_by_freq[p.rf->f_sig->hz()].push_back(n.a_line_db);
                row["reference_discrepancy_db"] = num(std::abs(n.a_line_db - e->a_line_db));
            }
            const auto dbm = p.rf->drive_dbm();
            const double at = m.fit.contamination_at_dbm;
            if (at >= dbm.front() && at <= dbm.back()) {
                try {
                    row["contamination_fraction_ratio"] =
                        num(contamination_fraction(*p.rf, *p.reference, a_att, PowerLevel::from_dbm(at)));
                } catch (const std::exception&) {
                    row["contamination_fraction_ratio"] = nullptr;
                }
                row["contamination_at_dbm"] = at;
            }
        }
        by_freq[p.rf->f_sig->hz()].push_back(e);
        pairs.push_back(row);
    }

    ojson profile = ojson::array();
    std::map<double, ojson> rows;
    for (const auto& [f, es] : by_freq) {
        double sum = 0.0, err_sq = 0.0;
        for (const auto* e : es) {
            sum += e->a_line_db;
            err_sq += e->a_line_err_db * e->a_line_err_db;
        }
        const double n = static_cast<double>(es.size());
        const ProfilePoint pt{f, sum / n, std::sqrt(err_sq) / n};
        profile_out.push_back(pt);
        ojson row{{"f_sig_hz", f},
                  {"status", "ok"},
                  {"a_line_db", num(pt.a_line_db)},
                  {"a_line_err_db", num(pt.err_db)},
                  {"bands_count", es.size()},
                  {"band_discrepancy_db", opt_num(es.front()->discrepancy_db)}};
        // Only compared when every band at this frequency has a reference trace.
        if (auto it = noref_by_freq.find(f); it != noref_by_freq.end() && it->second.size() == es.size()) {
            double noref = 0.0;
            for (double v : it->second) noref += v;
            noref /= n;
            row["a_line_no_reference_db"] = num(noref);
            row["reference_discrepancy_db"] = num(std::abs(noref - pt.a_line_db));
        }
        rows.emplace(f, row);
    }
    for (const auto& [f, msg] : failures_by_freq) {
        if (!rows.count(f)) rows.emplace(f, ojson{{"f_sig_hz", f}, {"status", "failed"}, {"message", msg}});
    }
    for (auto& [f, row] : rows) profile.push_back(row);

    if (failures_by_freq.empty()) {
        log.ok("attenuation");
    } else {
        log.fail("attenuation", std::to_string(failures_by_freq.size()) + " signal frequency(ies) failed; see pairs");
    }
    return ojson{{"a_att_db", m.a_att_db}, {"pairs", pairs}, {"profile", profile}};
}

ojson run_power_law(const Manifest& m, StageLog& log) {
    const auto path = m.base_dir / *m.thermometry_file;
    const auto rows = read_thermometry_csv(path);
    try {
        std::vector<PowerTemperaturePoint> pts;
        for (const auto& r : rows) pts.push_back({PowerLevel(r.joule_power_w), Temperature(r.temperature_k)});
        const auto fit = fit_power_law(pts, Temperature(m.bath_temperature_k));
        log.ok("power_law");
        return ojson{{"status", "ok"},
                     {"points_count", fit.n_points},
                     {"sigma_v_w_per_k_alpha", num(fit.value("sigma_v"))},
                     {"sigma_v_err_w_per_k_alpha", num(fit.error("sigma_v"))},
                     {"alpha_exponent", num(fit.value("alpha"))},
                     {"alpha_err_exponent", num(fit.error("alpha"))},
                     {"residual_norm_ln_ratio", num(fit.residual_norm)}};
    } catch (const std::exception& e) {
        log.fail("power_law", e.what());
        return ojson{{"status", "failed"}, {"message", e.what()}};
    }
}

ojson run_transient(const Manifest& m, StageLog& log) {
    const auto path = m.base_dir / *m.transient_file;
    const auto trace = transient_trace(read_transient_csv(path), path.string());
    ojson out{{"status", "ok"}};
    bool failed = false;
    for (auto seg : {TransientSegment::Heat, TransientSegment::Cool}) {
        const std::string name = seg == TransientSegment::Heat ? "heat" : "cool";
        try {
            const auto fit = fit_exponential(trace, seg, {m.fit.transient_skip_fraction});
            out["tau_" + name + "_s"] = num(fit.value("tau"));
            out["tau_" + name + "_err_s"] = num(fit.error("tau"));
            out["asymptote_" + name + "_k"] = num(fit.value("asymptote"));
            out["r_squared_" + name + "_ratio"] = num(fit.metric("r_squared").value_or(NAN));
            if (!fit.diagnostics.empty()) out["diagnostics_" + name] = fit.diagnostics;
        } catch (const std::exception& e) {
            out["tau_" + name + "_s"] = nullptr;
            out["message_" + name] = e.what();
            failed = true;
        }
    }
    if (failed) {
        out["status"] = "failed";
        log.fail("transient", "exponential fit failed; see thermal.transient");
    } else {
        log.ok("transient");
    }
    return out;
}

ojson run_readout(const Manifest& m, const std::vector<ProfilePoint>& profile, StageLog& log) {
    const PowerRatio a_att = PowerRatio::from_db(m.a_att_db);
    ojson rows = ojson::array();
    bool failed = false;
    for (const auto& files : m.iq) {
        const IqFile file = read_iq(m.base_dir / files.samples_file, m.base_dir / files.metadata_file);
        ojson row{{"f_sig_hz", file.meta.f_sig_hz}, {"p_sig_dbm", file.meta.p_sig_dbm}};
        try {
            std::string note;
            const auto a_line = profile_at(profile, file.meta.f_sig_hz, note);
            if (!a_line) throw FitError("no line attenuation available from the PSD stage");
            const double a_err = std::hypot(a_line->err_db, m.fit.a_line_systematic_db);
            const IqRecord rec = iq_record(file);
            const PowerLevel p_input = PowerRatio::from_db(a_line->a_line_db) * (a_att * rec.p_sig);
            const auto fit = added_noise_from_iq(rec, p_input);
            const double n_add = fit.value("n_add");
            // n_add + 1/2 scales linearly with the assumed input power.
            const double n_add_sys = (n_add + 0.5) * std::log(10.0) / 10.0 * a_err;
            const auto gain = gain_with_uncertainty(output_tone_power(rec, fit.value("mu")), p_input, a_err);
            row["status"] = "ok";
            row["a_line_db"] = num(a_line->a_line_db);
            row["a_line_err_db"] = num(a_err);
            row["p_input_dbm"] = num(p_input.dbm());
            row["samples_count"] = rec.samples.size();
            row["n_sig_photons"] = num(fit.metric("n_sig").value_or(NAN));
            row["n_add_photons"] = num(n_add);
            row["n_add_stat_err_photons"] = num(fit.error("n_add"));
            row["n_add_sys_err_photons"] = num(n_add_sys);
            row["n_add_err_photons"] = num(std::hypot(fit.error("n_add"), n_add_sys));
            row["gain_db"] = num(gain.value);
            row["gain_err_db"] = num(gain.error);
            row["snr_ratio"] = num(fit.metric("snr").value_or(NAN));
            row["isotropy_offdiag_ratio"] = num(fit.metric("isotropy_offdiag").value_or(NAN));
            row["isotropy_var_ratio"] = num(fit.metric("isotropy_var_ratio").value_or(NAN));
            std::vector<std::string> diags = fit.diagnostics;
            if (!note.empty()) diags.push_back(note);
            row["diagnostics"] = diags;
        } catch (const std::exception& e) {
            row["status"] = "failed";
            row["message"] = e.what();
            failed = true;
        }
        rows.push_back(row);
    }
    if (failed) {
        log.fail("readout", "added-noise analysis failed for at least one tone; see readout");
    } else {
        log.ok("readout");
    }
    return rows;
}

ojson run_thermometer(const Manifest& m, const CommandOptions& opts, StageLog& log) {
    const auto& t = *m.thermometer;
    const std::string conv_name = opts.convention.value_or(t.convention);
    try {
        const auto conv = thermometer_convention_from_string(conv_name);
        const auto a = thermometer_attenuation(Frequency(t.f_ge_hz), t.linewidth_rad_s,
                                               PowerLevel::from_dbm(t.p_in_min_dbm), conv);
        log.ok("thermometer");
        return ojson{{"status", "ok"},
                     {"convention", std::string(to_string(conv))},
                     {"f_ge_hz", t.f_ge_hz},
                     {"linewidth_rad_s", t.linewidth_rad_s},
                     {"p_in_min_dbm", t.p_in_min_dbm},
                     {"attenuation_db", num(a.db())}};
    } catch (const std::exception& e) {
        log.fail("thermometer", e.what());
        return ojson{{"status", "failed"}, {"message", e.what()}};
    }
}

}  // namespace

FitOutcome run_fit(const Manifest& m, const CommandOptions& opts) {
    StageLog log;
    ojson report;
    nlohmann::json effective = m.effective;
    if (opts.seed) effective["manifest"]["seed"] = *opts.seed;
    if (opts.window_min_dbm) effective["cli_overrides"]["window_min_dbm"] = *opts.window_min_dbm;
    if (opts.window_max_dbm) effective["cli_overrides"]["window_max_dbm"] = *opts.window_max_dbm;
    if (opts.convention) effective["cli_overrides"]["convention"] = *opts.convention;
    report["provenance"] = ojson{{"tool", "noisecal"},
                                 {"tool_version", tool_version()},
                                 {"command", "fit"},
                                 {"config_hash_fnv1a64", config_hash(effective)},
                                 {"source_config_hash_fnv1a64", m.source_config_hash ? ojson(*m.source_config_hash) : ojson(nullptr)},
                                 {"rng_seed_u64", opts.seed.value_or(m.seed)}};

    const auto psd_path = m.base_dir / m.psd_file;
    const auto traces = psd_traces(read_psd_csv(psd_path), psd_path.string());

    std::vector<ProfilePoint> profile;
    report["attenuation"] = run_attenuation(m, opts, traces, profile, log);

    ojson thermal = ojson::object();
    if (m.thermometry_file) thermal["power_law"] = run_power_law(m, log);
    if (m.transient_file) thermal["transient"] = run_transient(m, log);
    report["thermal"] = thermal;
    report["readout"] = run_readout(m, profile, log);
    if (m.thermometer) report["thermometer"] = run_thermometer(m, opts, log);
    report["stages"] = log.entries;
    return FitOutcome{report, log.failed ? kExitFitFailure : kExitOk};
}

int cmd_fit(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.convention) (void)thermometer_convention_from_string(*opts.convention);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        const nlohmann::json doc = load_json(opts.config);
        Manifest m = parse_manifest(doc, opts.config.string());
        m.base_dir = opts.config.parent_path();
        const FitOutcome outcome = run_fit(m, opts);

        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) throw IoError(opts.out_dir.string() + ": cannot create output directory: " + ec.message());
        const auto path = opts.out_dir / "report.json";
        write_text(path, outcome.report.dump(2) + "\n");

        for (const auto& s : outcome.report["stages"]) {
            out << s["stage"].get<std::string>() << ": " << s["status"].get<std::string>();
            if (s.contains("message")) out << " (" << s["message"].get<std::string>() << ")";
            out << "\n";
        }
        out << "report written to " << path.string() << "\n";
        if (outcome.exit_code != kExitOk) err << "error: one or more fit stages failed\n";
        return outcome.exit_code;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace noisecal::workbench
