#include "nvc/sim/campaign.hpp"

#include "nvc/constants.hpp"
#include "nvc/dsp/dft.hpp"
#include "nvc/error.hpp"
#include "nvc/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <numeric>
#include <set>
#include <sstream>

namespace nvc::sim {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

CampaignReport new_report(const ComparatorConfig& cfg, std::string kind) {
    CampaignReport r;
    r.kind = std::move(kind);
    r.config = cfg;
    r.provenance = {cfg.seed, utc_timestamp(), software_version()};
    return r;
}

struct MeanStats {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
};

MeanStats stats(const std::vector<double>& v) {
    MeanStats s;
    if (v.empty()) {
        return s;
    }
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - s.mean) * (x - s.mean);
        }
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(v.size()));
    }
    return s;
}

// Flux amplitude at f, signed by whether the component sits in phase with the
// drive after the core lag and readout response are accounted for.
double signed_flux(const dsp::BinEstimate& bin, std::complex<double> response, double lag) {
    const double amplitude = bin.amplitude / std::abs(response);
    const double expected = std::arg(response) - lag;
    return std::cos(bin.phase - expected) >= 0.0 ? amplitude : -amplitude;
}

AllanCampaign allan_summary(AllanCampaign al, const TimeSeries& sequence,
                            std::span<const double> taus, CampaignReport& report) {
    std::vector<double> tau_list(taus.begin(), taus.end());
    if (tau_list.empty()) {
        const double period = sequence.sample_period();
        tau_list = dsp::log_spaced_taus(period, std::max(period, sequence.duration() / 3.0), 10);
    }
    al.curve = dsp::allan_deviation(sequence, tau_list);
    if (!al.curve.omitted_taus.empty()) {
        report.warnings.push_back(std::to_string(al.curve.omitted_taus.size()) +
                                  " taus omitted (longer than duration / 3)");
    }
    for (double sig : al.curve.sigmas) {
        al.sigma_current.push_back(sig / al.conversion);
    }
    if (al.curve.size() > 0) {
        const auto m = dsp::allan_minimum(al.curve);
        al.min_tau = m.tau;
        al.min_sigma = m.sigma;
        al.min_sigma_current = m.sigma / al.conversion;
        try {
            al.slopes = dsp::noise_slope_id(al.curve);
        } catch (const ValidationError& e) {
            report.warnings.push_back(std::string("slope identification skipped: ") + e.what());
        }
    }
    return al;
}

} // namespace

CampaignReport run_ac_campaign(const ComparatorConfig& cfg, std::span<const double> frequencies,
                               std::span<const double> amplitudes, double window, int repeats) {
    if (frequencies.empty() || amplitudes.empty()) {
        throw ValidationError("ac campaign: frequency and amplitude lists must be non-empty");
    }
    if (!(window > 0.0) || repeats < 1) {
        throw ValidationError("ac campaign: window > 0 and repeats >= 1 required");
    }
    const double f_max = *std::max_element(frequencies.begin(), frequencies.end());
    cfg.validate(f_max);

    CampaignReport report = new_report(cfg, "ac");
    AcCampaign ac;
    const double spectrum_amp = *std::max_element(amplitudes.begin(), amplitudes.end());

    for (std::size_t i_f = 0; i_f < frequencies.size(); ++i_f) {
        const double f = frequencies[i_f];
        std::complex<double> response = 1.0;
        std::string freq_error;
        try {
            if (!(f > 0.0)) {
                throw ValidationError("drive frequency must be > 0");
            }
            response = readout_response(cfg, f);
        } catch (const Error& e) {
            freq_error = e.what();
        }
        const double lag = f > 0.0 ? magcore::transfer_phase_lag(f, cfg.material) : 0.0;

        for (std::size_t i_a = 0; i_a < amplitudes.size(); ++i_a) {
            AcCell cell;
            cell.frequency = f;
            cell.amplitude = amplitudes[i_a];
            cell.repeats = repeats;
            cell.window = window;
            cell.readout_gain = std::abs(response);
            cell.error = freq_error;
            try {
                if (!freq_error.empty()) {
                    throw ValidationError(freq_error);
                }
                if (!(cell.amplitude > 0.0)) {
                    throw ValidationError("drive amplitude must be > 0");
                }
                cell.conversion = cfg.conversion(f);
                cell.injected_ratio_error = cfg.ratio_error(f);
                std::vector<double> fluxes;
                fluxes.reserve(static_cast<std::size_t>(repeats));
                for (int r = 0; r < repeats; ++r) {
                    SimulationOptions opts;
                    opts.seed = derive_seed(cfg.seed, {0xAC, i_f, i_a, static_cast<std::uint64_t>(r)});
                    const auto series =
                        simulate_measurement(cfg, AcDrive{f, cell.amplitude}, window, opts);
                    fluxes.push_back(signed_flux(dsp::dft_bin(series, f), response, lag));
                    if (r == 0 && i_f == 0 && cell.amplitude == spectrum_amp && !ac.spectrum) {
                        const double top = std::min(500.0, 0.5 * cfg.sample_rate * (1.0 - 1e-12));
                        auto spec = dsp::amplitude_spectrum(series, top);
                        Spectrum s;
                        s.frequency = f;
                        s.amplitude = cell.amplitude;
                        s.frequencies = std::move(spec.frequencies);
                        s.flux = std::move(spec.amplitudes);
                        s.current.reserve(s.flux.size());
                        for (std::size_t k = 0; k < s.flux.size(); ++k) {
                            s.current.push_back(s.flux[k] / cfg.conversion(s.frequencies[k]));
                        }
                        ac.spectrum = std::move(s);
                    }
                }
                const auto fs = stats(fluxes);
                cell.flux_mean = fs.mean;
                cell.flux_se = fs.se;
                for (double b : fluxes) {
                    cell.currents.push_back(b / cell.conversion);
                }
                const auto cs = stats(cell.currents);
                cell.current_mean = cs.mean;
                cell.current_se = cs.se;
                cell.current_sd = cs.sd;
                cell.ratio_error = cs.mean / cell.amplitude;
                cell.ratio_error_se = cs.se / cell.amplitude;
                cell.negative_ratio_error = cell.ratio_error < 0.0;
            } catch (const Error& e) {
                cell.error = e.what();
                report.warnings.push_back("cell f=" + std::to_string(f) +
                                          " Hz, I=" + std::to_string(cell.amplitude) +
                                          " A failed: " + e.what());
            }
            ac.cells.push_back(std::move(cell));
        }
    }

    // Linearity: current difference against amplitude at each frequency.
    for (double f : frequencies) {
        std::vector<dsp::Point> pts;
        for (const auto& c : ac.cells) {
            if (c.frequency == f && c.error.empty()) {
                pts.push_back({c.amplitude, c.current_mean});
            }
        }
        std::set<double> distinct;
        for (const auto& p : pts) {
            distinct.insert(p.x);
        }
        if (distinct.size() < 2) {
            continue;
        }
        try {
            ac.linearity.push_back({f, dsp::fit_line(pts)});
        } catch (const Error& e) {
            report.warnings.push_back(std::string("linearity fit failed: ") + e.what());
        }
    }

    // Frequency response: ratio error against frequency at each amplitude.
    for (double a : amplitudes) {
        std::vector<dsp::Point> pts;
        for (const auto& c : ac.cells) {
            if (c.amplitude == a && c.error.empty()) {
                pts.push_back({c.frequency, c.ratio_error});
            }
        }
        std::set<double> distinct;
        for (const auto& p : pts) {
            distinct.insert(p.x);
        }
        if (distinct.size() < 3) {
            continue;
        }
        try {
            ac.frequency_response.push_back(
                {a, dsp::fit_frequency_response(pts, dsp::ratio_frequency_model())});
        } catch (const ConvergenceError& e) {
            report.warnings.push_back(std::string("frequency-response fit: ") + e.what());
        }
    }

    report.ac = std::move(ac);
    return report;
}

CampaignReport run_dc_campaign(const ComparatorConfig& cfg, double current,
                               const dsp::SquareWaveProtocol& proto) {
    proto.validate();
    if (!(current >= 0.0)) {
        throw ValidationError("dc campaign: current must be >= 0");
    }
    cfg.validate();
    CampaignReport report = new_report(cfg, "dc");
    SimulationOptions opts;
    opts.seed = derive_seed(cfg.seed, {0xDC});
    const double duration = 2.0 * proto.half_period * proto.cycles;
    const auto series = simulate_measurement(cfg, DcDrive{current, proto}, duration, opts);
    const auto sw = dsp::square_wave_extract(series, proto);

    DcCampaign dc;
    dc.current = current;
    dc.protocol = proto;
    dc.conversion = cfg.conversion(0.0);
    dc.step = sw.step;
    dc.step_se = sw.standard_error;
    dc.off_mean = sw.off_mean;
    dc.current_difference = sw.step / dc.conversion;
    dc.current_difference_se = sw.standard_error / dc.conversion;
    if (current > 0.0) {
        dc.ratio_error = dc.current_difference / current;
        dc.ratio_error_se = dc.current_difference_se / current;
    } else {
        report.warnings.push_back("zero drive current: ratio error undefined, reported as 0");
    }
    dc.per_cycle = sw.per_cycle;
    report.dc = std::move(dc);
    return report;
}

CampaignReport run_allan_campaign(const ComparatorConfig& cfg, const Drive& drive,
                                  double total_duration, std::span<const double> taus,
                                  const AllanOptions& options) {
    const double s = options.time_compression;
    if (!(s >= 1.0)) {
        throw ValidationError("allan campaign: time_compression >= 1 required");
    }
    if (!(total_duration > 0.0)) {
        throw ValidationError("allan campaign: total_duration > 0 required");
    }
    if (!taus.empty()) {
        const double tau_max = *std::max_element(taus.begin(), taus.end());
        if (total_duration < 3.0 * tau_max) {
            throw ValidationError("allan campaign: total_duration >= 3 x max tau required");
        }
    }
    const ComparatorConfig run_cfg = s > 1.0 ? time_compressed(cfg, s) : cfg;
    CampaignReport report = new_report(cfg, "allan");
    AllanCampaign al;
    al.total_duration = total_duration;
    al.time_compression = s;

    SimulationOptions opts;
    opts.seed = derive_seed(cfg.seed, {0xA11A});
    opts.settle_time = 0.05 / s;

    TimeSeries sequence;
    if (const auto* ac = std::get_if<AcDrive>(&drive)) {
        if (!(options.window > 0.0)) {
            throw ValidationError("allan campaign: window > 0 required");
        }
        al.drive = "ac";
        al.frequency = ac->frequency;
        al.amplitude = ac->amplitude;
        al.sequence_period = options.window;
        al.conversion = cfg.conversion(ac->frequency);
        const double f_run = ac->frequency * s;
        const double window_run = options.window / s;
        const auto n_windows =
            static_cast<std::size_t>(std::floor(total_duration / options.window + 1e-9));
        if (n_windows < 3) {
            throw ValidationError("allan campaign: fewer than 3 windows");
        }
        run_cfg.validate(f_run);
        const auto response = readout_response(run_cfg, f_run);
        const double lag = magcore::transfer_phase_lag(f_run, run_cfg.material);
        const auto series = simulate_measurement(
            run_cfg, AcDrive{f_run, ac->amplitude}, window_run * static_cast<double>(n_windows), opts);
        const auto per = static_cast<std::size_t>(std::llround(window_run * run_cfg.sample_rate));
        sequence.sample_rate = 1.0 / options.window;
        sequence.samples.reserve(n_windows);
        TimeSeries chunk{run_cfg.sample_rate, 0.0, {}};
        for (std::size_t w = 0; w < n_windows && (w + 1) * per <= series.size(); ++w) {
            const auto first = series.samples.begin() + static_cast<std::ptrdiff_t>(w * per);
            chunk.samples.assign(first, first + static_cast<std::ptrdiff_t>(per));
            chunk.start_time = static_cast<double>(w * per) / run_cfg.sample_rate;
            // Each window is re-referenced to its own start, so shift the phase
            // expectation by the drive phase at that instant.
            auto bin = dsp::dft_bin(chunk, f_run);
            const double cycles = constants::cycle_fraction(f_run * chunk.start_time);
            bin.phase -= constants::two_pi * cycles;
            sequence.samples.push_back(signed_flux(bin, response, lag));
        }
    } else {
        const auto& dc = std::get<DcDrive>(drive);
        dc.protocol.validate();
        al.drive = "dc";
        al.amplitude = dc.amplitude;
        al.sequence_period = 2.0 * dc.protocol.half_period;
        al.conversion = cfg.conversion(0.0);
        dsp::SquareWaveProtocol proto = dc.protocol;
        proto.half_period /= s;
        proto.transient_exclusion /= s;
        proto.cycles = static_cast<int>(std::floor(total_duration / al.sequence_period + 1e-9));
        if (proto.cycles < 3) {
            throw ValidationError("allan campaign: fewer than 3 cycles");
        }
        run_cfg.validate();
        const auto series = simulate_measurement(run_cfg, DcDrive{dc.amplitude, proto},
                                                 2.0 * proto.half_period * proto.cycles, opts);
        const auto sw = dsp::square_wave_extract(series, proto);
        sequence.sample_rate = 1.0 / al.sequence_period;
        sequence.samples = sw.per_cycle;
    }

    report.allan = allan_summary(std::move(al), sequence, taus, report);
    return report;
}


CampaignReport analyze_ac_series(const ComparatorConfig& cfg, const TimeSeries& series, double f0,
                                 double amplitude, double window) {
    validate(series);
    if (!(amplitude > 0.0)) {
        throw ValidationError("analyze: drive amplitude must be > 0");
    }
    if (!(window >= 0.0)) {
        throw ValidationError("analyze: window must be >= 0");
    }
    ComparatorConfig c = cfg;
    c.sample_rate = series.sample_rate;
    CampaignReport report = new_report(c, "analysis");
    const double gain = readout_gain(c, f0);
    const std::size_t per = window > 0.0
                                ? static_cast<std::size_t>(std::llround(window * series.sample_rate))
                                : series.size();
    if (per == 0 || per > series.size()) {
        throw ValidationError("analyze: window longer than the record");
    }
    AcCell cell;
    cell.frequency = f0;
    cell.amplitude = amplitude;
    cell.window = static_cast<double>(per) / series.sample_rate;
    cell.conversion = c.conversion(f0);
    cell.readout_gain = gain;
    cell.injected_ratio_error = c.ratio_error(f0);
    std::vector<double> fluxes;
    TimeSeries chunk{series.sample_rate, 0.0, {}};
    for (std::size_t start = 0; start + per <= series.size(); start += per) {
        const auto first = series.samples.begin() + static_cast<std::ptrdiff_t>(start);
        chunk.samples.assign(first, first + static_cast<std::ptrdiff_t>(per));
        fluxes.push_back(dsp::dft_bin_amplitude(chunk, f0) / gain);
    }
    cell.repeats = static_cast<int>(fluxes.size());
    const auto fs = stats(fluxes);
    cell.flux_mean = fs.mean;
    cell.flux_se = fs.se;
    for (double b : fluxes) {
        cell.currents.push_back(b / cell.conversion);
    }
    const auto cs = stats(cell.currents);
    cell.current_mean = cs.mean;
    cell.current_se = cs.se;
    cell.current_sd = cs.sd;
    cell.ratio_error = cs.mean / amplitude;
    cell.ratio_error_se = cs.se / amplitude;

    AcCampaign ac;
    ac.cells.push_back(std::move(cell));
    auto spec = dsp::amplitude_spectrum(series, std::min(500.0, 0.5 * series.sample_rate));
    Spectrum s{f0, amplitude, std::move(spec.frequencies), std::move(spec.amplitudes), {}};
    for (std::size_t k = 0; k < s.flux.size(); ++k) {
        s.current.push_back(s.flux[k] / c.conversion(s.frequencies[k]));
    }
    ac.spectrum = std::move(s);
    report.ac = std::move(ac);
    return report;
}

CampaignReport analyze_dc_series(const ComparatorConfig& cfg, const TimeSeries& series,
                                 double current, const dsp::SquareWaveProtocol& proto) {
    validate(series);
    ComparatorConfig c = cfg;
    c.sample_rate = series.sample_rate;
    CampaignReport report = new_report(c, "analysis");
    const auto sw = dsp::square_wave_extract(series, proto);
    DcCampaign dc;
    dc.current = current;
    dc.protocol = proto;
    dc.protocol.cycles = static_cast<int>(sw.cycles_used);
    dc.conversion = c.conversion(0.0);
    dc.step = sw.step;
    dc.step_se = sw.standard_error;
    dc.off_mean = sw.off_mean;
    dc.current_difference = sw.step / dc.conversion;
    dc.current_difference_se = sw.standard_error / dc.conversion;
    if (current > 0.0) {
        dc.ratio_error = dc.current_difference / current;
        dc.ratio_error_se = dc.current_difference_se / current;
    }
    dc.per_cycle = sw.per_cycle;
    report.dc = std::move(dc);
    return report;
}

CampaignReport analyze_allan_series(const ComparatorConfig& cfg, const TimeSeries& series,
                                    std::span<const double> taus, double f0) {
    validate(series);
    ComparatorConfig c = cfg;
    c.sample_rate = series.sample_rate;
    CampaignReport report = new_report(c, "allan");
    AllanCampaign al;
    al.drive = "series";
    al.frequency = f0;
    al.total_duration = series.duration();
    al.sequence_period = series.sample_period();
    al.conversion = c.conversion(f0);
    report.allan = allan_summary(std::move(al), series, taus, report);
    return report;
}

} // namespace nvc::sim
