// nvc: command-line front end for the comparator twin.

#include "nvc/dsp/fit.hpp"
#include "nvc/error.hpp"
#include "nvc/io/config.hpp"
#include "nvc/io/csv.hpp"
#include "nvc/io/plotdata.hpp"
#include "nvc/io/report_json.hpp"
#include "nvc/sim/campaign.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

enum Exit : int {
    ok = 0,
    usage = 1,
    config_error = 2,
    data_error = 3,
    runtime_error = 4,
    io_error = 5,
};

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int verbosity = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
    if (with_config) {
        cmd->add_option("--config", c.config_path, "YAML config (built-in calibrated defaults if omitted)")
            ->check(CLI::ExistingFile);
    }
    cmd->add_option("--seed", c.seed, "override the config seed");
    cmd->add_option("--out", c.out_dir, "output directory")
        ->envname("NVC_OUTPUT_DIR")
        ->capture_default_str();
}

nvc::sim::ComparatorConfig resolve_config(const Common& c) {
    nvc::sim::ComparatorConfig cfg = nvc::sim::calibrated_defaults();
    if (!c.config_path.empty()) {
        auto loaded = nvc::io::load_config(c.config_path);
        for (const auto& w : loaded.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        cfg = loaded.config;
    }
    if (c.seed) {
        cfg.seed = *c.seed;
    }
    return cfg;
}

void finish(const nvc::sim::CampaignReport& report, const Common& c) {
    std::filesystem::create_directories(c.out_dir);
    const std::string path = (std::filesystem::path(c.out_dir) / "report.json").string();
    nvc::io::write_report(report, path);
    auto files = nvc::io::emit_plotdata(report, c.out_dir);
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (c.verbosity > 0) {
        std::cerr << "wrote " << path << '\n';
        for (const auto& f : files) {
            std::cerr << "wrote " << f << '\n';
        }
    }
}

void print_summary(const nvc::sim::CampaignReport& r) {
    std::cout << "kind: " << r.kind << "  seed: " << r.provenance.seed << '\n';
    if (r.ac) {
        for (const auto& c : r.ac->cells) {
            if (!c.error.empty()) {
                std::cout << "  f=" << c.frequency << " Hz I=" << c.amplitude << " A  error: " << c.error
                          << '\n';
                continue;
            }
            std::cout << "  f=" << c.frequency << " Hz I=" << c.amplitude
                      << " A  current difference " << c.current_mean << " A +- " << c.current_se
                      << "  ratio error " << c.ratio_error << " A/A +- " << c.ratio_error_se << '\n';
        }
        for (const auto& f : r.ac->frequency_response) {
            std::cout << "  fit at I=" << f.amplitude << " A: eps_h " << f.fit.at("eps_h")
                      << " A/A, eps_e " << f.fit.at("eps_e") << " 1/Hz\n";
        }
    }
    if (r.dc) {
        std::cout << "  step " << r.dc->step << " T +- " << r.dc->step_se << "  current difference "
                  << r.dc->current_difference << " A  ratio error " << r.dc->ratio_error << " A/A\n";
    }
    if (r.allan) {
        std::cout << "  Allan minimum " << r.allan->min_sigma << " T (" << r.allan->min_sigma_current
                  << " A) at tau " << r.allan->min_tau << " s\n";
        for (const auto& s : r.allan->slopes) {
            std::cout << "  tau " << s.tau_lo << ".." << s.tau_hi << " s: slope " << s.slope << " ("
                      << nvc::dsp::to_string(s.regime) << ")\n";
        }
    }
    if (r.fit) {
        std::cout << "  model " << r.fit->model << ':';
        for (const auto& [name, value] : r.fit->fit.parameters) {
            std::cout << ' ' << name << '=' << value << " +- " << r.fit->fit.standard_error(name);
        }
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NV-diamond current comparator twin"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nvc::sim::software_version());
    Common common;
    app.add_flag("-v,--verbose", common.verbosity, "more output on stderr");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "simulate a measurement or an Allan campaign");
    add_common(sim_cmd, common);
    std::string protocol = "ac";
    double f0 = 67.0;
    double amplitude = 1.0;
    double duration = 1.0;
    double window = 1.0;
    double half_period = 1.0;
    double exclusion = 0.5;
    int cycles = 10;
    double total_duration = 2000.0;
    double compression = 1.0;
    std::vector<double> taus;
    sim_cmd->add_option("--protocol", protocol)
        ->check(CLI::IsMember({"ac", "dc", "allan-ac", "allan-dc"}))
        ->capture_default_str();
    sim_cmd->add_option("--f0", f0, "drive frequency [Hz]")->capture_default_str();
    sim_cmd->add_option("--amplitude", amplitude, "drive current [A]")->capture_default_str();
    sim_cmd->add_option("--duration", duration, "AC record length [s]")->capture_default_str();
    sim_cmd->add_option("--window", window, "demodulation window [s]")->capture_default_str();
    sim_cmd->add_option("--half-period", half_period, "square-wave half period [s]")->capture_default_str();
    sim_cmd->add_option("--exclusion", exclusion, "transient exclusion [s]")->capture_default_str();
    sim_cmd->add_option("--cycles", cycles, "square-wave cycles")->capture_default_str();
    sim_cmd->add_option("--total-duration", total_duration, "Allan run length [s]")->capture_default_str();
    sim_cmd->add_option("--time-compression", compression, "Allan time-scale factor")->capture_default_str();
    sim_cmd->add_option("--taus", taus, "Allan taus [s], comma separated")->delimiter(',');

    // analyze
    auto* an_cmd = app.add_subcommand("analyze", "extract the current difference from a recorded series");
    add_common(an_cmd, common);
    std::string input;
    double current = 1.0;
    double an_window = 0.0;
    an_cmd->add_option("--input", input, "CSV with time_s,field_T")->required()->check(CLI::ExistingFile);
    an_cmd->add_option("--protocol", protocol)->check(CLI::IsMember({"ac", "dc"}))->capture_default_str();
    an_cmd->add_option("--f0", f0, "excitation frequency [Hz]")->capture_default_str();
    an_cmd->add_option("--amplitude,--current", current, "drive current [A]")->capture_default_str();
    an_cmd->add_option("--window", an_window, "AC window [s], 0 = whole record")->capture_default_str();
    an_cmd->add_option("--half-period", half_period)->capture_default_str();
    an_cmd->add_option("--exclusion", exclusion)->capture_default_str();

    // allan
    auto* al_cmd = app.add_subcommand("allan", "overlapping Allan deviation of a recorded series");
    add_common(al_cmd, common);
    double al_f0 = 0.0;
    al_cmd->add_option("--input", input, "CSV with time_s,field_T")->required()->check(CLI::ExistingFile);
    al_cmd->add_option("--taus", taus, "taus [s], comma separated (default: 10 per decade)")->delimiter(',');
    al_cmd->add_option("--f0", al_f0, "frequency for the T -> A conversion [Hz]")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a response model to a two-column CSV");
    add_common(fit_cmd, common, false);
    std::string model = "ratio-freq";
    fit_cmd->add_option("--input", input, "CSV: x column, y column (header required)")
        ->required()
        ->check(CLI::ExistingFile);
    fit_cmd->add_option("--model", model)->check(CLI::IsMember({"ratio-freq", "line"}))->capture_default_str();

    // sweep
    auto* sw_cmd = app.add_subcommand("sweep", "AC campaign over a frequency x amplitude grid");
    add_common(sw_cmd, common);
    std::vector<double> freqs{67.0};
    std::vector<double> amps{1.0};
    int repeats = 100;
    sw_cmd->add_option("--freqs", freqs, "drive frequencies [Hz]")->delimiter(',');
    sw_cmd->add_option("--amps", amps, "drive amplitudes [A]")->delimiter(',');
    sw_cmd->add_option("--window", window, "window [s]")->capture_default_str();
    sw_cmd->add_option("--repeats", repeats)->capture_default_str();

    // dc
    auto* dc_cmd = app.add_subcommand("dc", "square-wave DC campaign");
    add_common(dc_cmd, common);
    dc_cmd->add_option("--current", current, "drive current [A]")->capture_default_str();
    dc_cmd->add_option("--half-period", half_period)->capture_default_str();
    dc_cmd->add_option("--exclusion", exclusion)->capture_default_str();
    dc_cmd->add_option("--cycles", cycles)->capture_default_str();

    // report
    auto* rep_cmd = app.add_subcommand("report", "print a stored report and re-emit its plot data");
    add_common(rep_cmd, common, false);
    rep_cmd->add_option("--input", input, "report.json")->required()->check(CLI::ExistingFile);

    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    }

    using namespace nvc;
    try {
        sim::CampaignReport report;
        if (sim_cmd->parsed()) {
            const auto cfg = resolve_config(common);
            if (protocol == "ac" || protocol == "dc") {
                sim::Drive drive = sim::AcDrive{f0, amplitude};
                dsp::SquareWaveProtocol proto{half_period, exclusion, cycles};
                double length = duration;
                if (protocol == "dc") {
                    drive = sim::DcDrive{amplitude, proto};
                    length = 2.0 * half_period * cycles;
                }
                const auto series = sim::simulate_measurement(cfg, drive, length);
                std::filesystem::create_directories(common.out_dir);
                io::save_timeseries(series, (std::filesystem::path(common.out_dir) / "series.csv").string());
                report = protocol == "ac" ? sim::analyze_ac_series(cfg, series, f0, amplitude, window)
                                          : sim::analyze_dc_series(cfg, series, amplitude, proto);
                report.kind = protocol;
            } else {
                sim::AllanOptions opts;
                opts.time_compression = compression;
                opts.window = window;
                sim::Drive drive = sim::AcDrive{f0, amplitude};
                if (protocol == "allan-dc") {
                    drive = sim::DcDrive{amplitude, {half_period, exclusion, 1}};
                }
                report = sim::run_allan_campaign(cfg, drive, total_duration, taus, opts);
            }
        } else if (an_cmd->parsed()) {
            const auto cfg = resolve_config(common);
            const auto series = io::load_timeseries(input);
            report = protocol == "ac"
                         ? sim::analyze_ac_series(cfg, series, f0, current, an_window)
                         : sim::analyze_dc_series(cfg, series, current,
                                                  {half_period, exclusion, 1 << 30});
        } else if (al_cmd->parsed()) {
            const auto cfg = resolve_config(common);
            report = sim::analyze_allan_series(cfg, io::load_timeseries(input), taus, al_f0);
        } else if (fit_cmd->parsed()) {
            const auto table = io::load_table(input);
            if (table.columns.size() < 2) {
                throw DataError(input + ": need at least two columns");
            }
            sim::FitReport fr;
            fr.model = model;
            fr.x_unit = table.columns[0];
            fr.y_unit = table.columns[1];
            for (const auto& row : table.rows) {
                fr.points.push_back({row[0], row[1]});
            }
            fr.fit = model == "line" ? dsp::fit_line(fr.points)
                                     : dsp::fit_frequency_response(fr.points, dsp::ratio_frequency_model());
            report.kind = "fit";
            report.config = sim::calibrated_defaults();
            report.provenance = {report.config.seed, "", sim::software_version()};
            report.fit = std::move(fr);
        } else if (sw_cmd->parsed()) {
            const auto cfg = resolve_config(common);
            report = sim::run_ac_campaign(cfg, freqs, amps, window, repeats);
        } else if (dc_cmd->parsed()) {
            const auto cfg = resolve_config(common);
            report = sim::run_dc_campaign(cfg, current, {half_period, exclusion, cycles});
        } else if (rep_cmd->parsed()) {
            report = io::read_report(input);
            print_summary(report);
            auto files = io::emit_plotdata(report, common.out_dir);
            if (common.verbosity > 0) {
                for (const auto& f : files) {
                    std::cerr << "wrote " << f << '\n';
                }
            }
            return Exit::ok;
        }
        finish(report, common);
        print_summary(report);
        return Exit::ok;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return Exit::data_error;
    } catch (const LockLossError& e) {
        std::cerr << "lock lost: " << e.what() << '\n';
        return Exit::runtime_error;
    } catch (const ConvergenceError& e) {
        std::cerr << "fit did not converge: " << e.what() << '\n';
        return Exit::runtime_error;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return Exit::io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return Exit::io_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Exit::runtime_error;
    }
}
