#include <iostream>

#ifdef NOISECAL_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "noisecal/workbench/commands.hpp"
#include "noisecal/workbench/errors.hpp"

using namespace noisecal::workbench;

namespace {

void add_common(CLI::App* sub, CommandOptions& o, std::optional<double>& wmin, std::optional<double>& wmax,
                std::optional<std::uint64_t>& seed, std::optional<std::string>& conv) {
    sub->add_option("--config", o.config, "Scenario config (simulate) or manifest (fit)")->required();
    sub->add_option("--seed", seed, "Override the RNG seed");
    sub->add_option("--window-min-dbm", wmin, "Force the lower fit-window edge");
    sub->add_option("--window-max-dbm", wmax, "Force the upper fit-window edge");
    sub->add_option("--convention", conv, "Thermometer unit convention");
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisecal: noise-source based calibration of cryogenic microwave lines", "noisecal"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    CommandOptions sim_opts, fit_opts;
    std::optional<double> sim_wmin, sim_wmax, fit_wmin, fit_wmax;
    std::optional<std::uint64_t> sim_seed, fit_seed;
    std::optional<std::string> sim_conv, fit_conv;

    auto* simulate = app.add_subcommand("simulate", "Synthesize measurement records from a scenario config");
    add_common(simulate, sim_opts, sim_wmin, sim_wmax, sim_seed, sim_conv);
    auto* fit = app.add_subcommand("fit", "Fit a record manifest and write report.json");
    add_common(fit, fit_opts, fit_wmin, fit_wmax, fit_seed, fit_conv);

    auto* report = app.add_subcommand("report", "Print the calibration table of a report");
    std::filesystem::path report_path, report_config;
    report->add_option("report", report_path, "report.json path");
    report->add_option("--config", report_config, "report.json path (alternative to the positional argument)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (simulate->parsed()) {
        sim_opts.seed = sim_seed;
        sim_opts.window_min_dbm = sim_wmin;
        sim_opts.window_max_dbm = sim_wmax;
        sim_opts.convention = sim_conv;
        return cmd_simulate(sim_opts, std::cout, std::cerr);
    }
    if (fit->parsed()) {
        fit_opts.seed = fit_seed;
        fit_opts.window_min_dbm = fit_wmin;
        fit_opts.window_max_dbm = fit_wmax;
        fit_opts.convention = fit_conv;
        return cmd_fit(fit_opts, std::cout, std::cerr);
    }
    const auto path = !report_path.empty() ? report_path : report_config;
    if (path.empty()) {
        std::cerr << "error: report needs a report.json path\n";
        return kExitUsage;
    }
    return cmd_report(path, std::cout, std::cerr);
}
