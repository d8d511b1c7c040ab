#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "noisecal/parallel.hpp"
#include "noisecal/thermal.hpp"
#include "noisecal/workbench/commands.hpp"
#include "noisecal/workbench/errors.hpp"
#include "noisecal/workbench/format.hpp"
#include "noisecal/workbench/records.hpp"

namespace noisecal::workbench {

namespace {

std::vector<PowerLevel> powers_from_dbm(const std::vector<double>& dbm) {
    std::vector<PowerLevel> out;
    out.reserve(dbm.size());
    for (double d : dbm) out.push_back(PowerLevel::from_dbm(d));
    return out;
}

std::string iq_stem(double f_sig_hz) { return "iq_" + format_double(f_sig_hz / 1e6) + "MHz"; }

struct SimulatedRecords {
    std::vector<std::vector<PsdRow>> psd_blocks;
    std::vector<TransientRow> transient;
    std::vector<ThermometryRow> thermometry;
    std::vector<IqFile> iq;
};

SimulatedRecords synthesize(const SimulateConfig& cfg, unsigned jobs) {
    const Scenario& sc = cfg.scenario;
    const SynthOptions synth_opts{cfg.psd.noise};
    SimulatedRecords rec;

    std::vector<double> dets;
    for (const auto& p : cfg.psd.pairs) {
        if (std::find(dets.begin(), dets.end(), p.f_det_hz) == dets.end()) dets.push_back(p.f_det_hz);
    }
    const auto rf_dbm = cfg.psd.rf_dbm.values();
    const auto rf_axis = powers_from_dbm(rf_dbm);
    const auto joule_axis = powers_from_dbm(cfg.psd.joule_dbm.values());
    std::vector<double> joule_watts;
    for (const auto& p : joule_axis) joule_watts.push_back(p.watts());

    // Every record owns a slot; tasks write only their slot so ordering is fixed.
    std::vector<std::function<void()>> tasks;
    rec.psd_blocks.resize(dets.size() + cfg.psd.pairs.size() * (cfg.psd.reference_line ? 2 : 1));
    std::size_t slot = 0;
    for (double f_det : dets) {
        tasks.emplace_back([&, f_det, slot] {
            const auto tr = synth_psd_trace(sc, PsdKind::Joule, joule_axis, std::nullopt, Frequency(f_det), synth_opts);
            rec.psd_blocks[slot] = psd_rows(tr, joule_watts);
        });
        ++slot;
    }
    for (const auto& pair : cfg.psd.pairs) {
        std::vector<PsdKind> kinds{PsdKind::Rf};
        if (cfg.psd.reference_line) kinds.push_back(PsdKind::RfReference);
        for (auto kind : kinds) {
            tasks.emplace_back([&, pair, kind, slot] {
                const auto tr = synth_psd_trace(sc, kind, rf_axis, Frequency(pair.f_sig_hz), Frequency(pair.f_det_hz),
                                                synth_opts);
                rec.psd_blocks[slot] = psd_rows(tr, rf_dbm);
            });
            ++slot;
        }
    }
    if (cfg.transient) {
        tasks.emplace_back([&] {
            const auto& tp = *cfg.transient;
            const auto p = power_for_temperature(sc.noise_source.thermal, Temperature(tp.target_temperature_k));
            std::vector<double> grid;
            const auto n = static_cast<long>(std::floor(tp.t_end_s / tp.dt_s + 0.5));
            for (long k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * tp.dt_s);
            rec.transient = transient_rows(synth_transient(sc, p, grid, tp.t_on_s, tp.t_off_s, tp.relative_noise));
        });
    }
    if (cfg.thermometry) {
        tasks.emplace_back([&] {
            const auto powers = powers_from_dbm(cfg.thermometry->power_dbm.values());
            const auto th = synth_thermometry(sc, powers, cfg.thermometry->relative_noise);
            for (std::size_t i = 0; i < powers.size(); ++i) {
                rec.thermometry.push_back({th.p_joule[i].watts(), th.temperature[i].kelvin()});
            }
        });
    }
    if (cfg.iq) {
        rec.iq.resize(cfg.iq->f_sig_hz.size());
        for (std::size_t k = 0; k < cfg.iq->f_sig_hz.size(); ++k) {
            tasks.emplace_back([&, k] {
                const auto& q = *cfg.iq;
                const IqSettings s{Frequency(q.f_sig_hz[k]), PowerLevel::from_dbm(q.p_sig_dbm), q.t_int_s, q.n_samples,
                                   q.digitizer_scale};
                const auto r = synth_iq(sc, s);
                rec.iq[k] = IqFile{{q.t_int_s, q.f_sig_hz[k], q.p_sig_dbm, q.digitizer_scale}, r.samples};
            });
        }
    }
    parallel_for(tasks.size(), jobs, [&](std::size_t i) { tasks[i](); });
    return rec;
}

}  // namespace

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        nlohmann::json doc = load_json(opts.config);
        if (opts.seed) doc["seed"] = *opts.seed;
        const SimulateConfig cfg = parse_simulate_config(doc, opts.config.string());

        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) throw IoError(opts.out_dir.string() + ": cannot create output directory: " + ec.message());

        const SimulatedRecords rec = synthesize(cfg, opts.jobs);

        Manifest m;
        m.psd_file = "psd.csv";
        std::vector<PsdRow> all;
        for (const auto& block : rec.psd_blocks) all.insert(all.end(), block.begin(), block.end());
        write_psd_csv(opts.out_dir / m.psd_file, all);
        if (cfg.transient) {
            m.transient_file = "transient.csv";
            write_transient_csv(opts.out_dir / *m.transient_file, rec.transient);
        }
        if (cfg.thermometry) {
            m.thermometry_file = "thermometry.csv";
            write_thermometry_csv(opts.out_dir / *m.thermometry_file, rec.thermometry);
        }
        for (const auto& file : rec.iq) {
            const std::string stem = iq_stem(file.meta.f_sig_hz);
            m.iq.push_back({stem + ".csv", stem + ".json"});
            write_iq(opts.out_dir / m.iq.back().samples_file, opts.out_dir / m.iq.back().metadata_file, file);
        }
        m.a_att_db = cfg.scenario.a_att().db();
        m.bath_temperature_k = cfg.scenario.noise_source.thermal.t_bath.kelvin();
        m.seed = cfg.scenario.rng_seed;
        m.fit = cfg.fit;
        m.thermometer = cfg.thermometer;
        m.source_config_hash = config_hash(doc);
        write_text(opts.out_dir / "manifest.json", manifest_to_json(m).dump(2) + "\n");

        out << "wrote " << all.size() << " PSD rows";
        if (cfg.transient) out << ", " << rec.transient.size() << " transient rows";
        if (cfg.thermometry) out << ", " << rec.thermometry.size() << " thermometry rows";
        if (!rec.iq.empty()) out << ", " << rec.iq.size() << " IQ records";
        out << " to " << opts.out_dir.string() << "\n";
        return kExitOk;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace noisecal::workbench
