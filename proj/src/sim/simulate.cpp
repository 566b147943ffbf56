#include "nvc/sim/simulate.hpp"

#include "nvc/constants.hpp"
#include "nvc/dsp/dft.hpp"
#include "nvc/error.hpp"
#include "nvc/random.hpp"
#include "nvc/tone.hpp"
#include "nvc/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

namespace nvc::sim {

namespace {

double max_excitation(const Drive& drive) {
    if (const auto* ac = std::get_if<AcDrive>(&drive)) {
        return ac->frequency;
    }
    return 0.0;
}

void lowpass_in_place(std::vector<double>& x, double cutoff, double sample_rate) {
    if (cutoff <= 0.0 || x.empty()) {
        return;
    }
    const double alpha = 1.0 - std::exp(-constants::two_pi * cutoff / sample_rate);
    double y = x.front();
    for (double& v : x) {
        y += alpha * (v - y);
        v = y;
    }
}

} // namespace

std::complex<double> lowpass_response(double cutoff, double sample_rate, double frequency) {
    if (cutoff <= 0.0) {
        return 1.0;
    }
    const double alpha = 1.0 - std::exp(-constants::two_pi * cutoff / sample_rate);
    const double omega = constants::two_pi * frequency / sample_rate;
    const std::complex<double> z = std::polar(1.0, -omega);
    return alpha / (1.0 - (1.0 - alpha) * z);
}

double lowpass_gain(double cutoff, double sample_rate, double frequency) {
    return std::abs(lowpass_response(cutoff, sample_rate, frequency));
}

namespace {

// Ratio-error random walk with increments of sd coefficient * sqrt(dt). Knots
// every 10 ms, linear in between: the walk has no content near the drive
// frequency worth resolving per sample.
std::vector<double> drift_path(std::size_t total, double coefficient, double fs,
                               std::uint64_t seed) {
    std::vector<double> path(total, 0.0);
    if (coefficient <= 0.0 || total == 0) {
        return path;
    }
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.01 * fs)));
    const double step_sd = coefficient * std::sqrt(static_cast<double>(stride) / fs);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double knot = 0.0;
    for (std::size_t start = 0; start < total; start += stride) {
        const double next = knot + step_sd * gauss(rng);
        const std::size_t end = std::min(total, start + stride);
        for (std::size_t i = start; i < end; ++i) {
            const double frac = static_cast<double>(i - start) / static_cast<double>(stride);
            path[i] = knot + (next - knot) * frac;
        }
        knot = next;
    }
    return path;
}

} // namespace

TimeSeries residual_flux(const ComparatorConfig& cfg, const Drive& drive, double duration,
                         double settle_time, std::uint64_t drift_seed) {
    const double fs = cfg.sample_rate;
    const auto n_settle = static_cast<long long>(std::llround(settle_time * fs));
    const auto n_main = static_cast<long long>(std::llround(duration * fs));
    if (n_main < 1) {
        throw ValidationError("simulate: duration shorter than one sample");
    }
    const auto total = static_cast<std::size_t>(n_settle + n_main);
    TimeSeries out{fs, -static_cast<double>(n_settle) / fs, std::vector<double>(total, 0.0)};

    const bool is_ac = std::holds_alternative<AcDrive>(drive);
    const auto drift =
        drift_path(total, is_ac ? cfg.ratio_drift.ac : cfg.ratio_drift.dc, fs, drift_seed);

    if (const auto* ac = std::get_if<AcDrive>(&drive)) {
        if (!(ac->amplitude > 0.0) || !(ac->frequency > 0.0)) {
            throw ValidationError("simulate: AC drive needs positive frequency and amplitude");
        }
        const double k = cfg.conversion(ac->frequency);
        const double eps = cfg.ratio_error(ac->frequency);
        const double lag = magcore::transfer_phase_lag(ac->frequency, cfg.material);
        fill_sine(out.samples, ac->frequency / fs, -static_cast<long long>(n_settle), -lag);
        for (std::size_t i = 0; i < total; ++i) {
            out.samples[i] *= k * ac->amplitude * (eps + drift[i]);
        }
    } else {
        const auto& dc = std::get<DcDrive>(drive);
        dc.protocol.validate();
        if (!(dc.amplitude >= 0.0)) {
            throw ValidationError("simulate: DC drive amplitude must be >= 0");
        }
        const double k0 = cfg.conversion(0.0);
        const auto half = std::max<long long>(1, std::llround(dc.protocol.half_period * fs));
        // Eddy currents smooth the edges with the same corner as the AC roll-off.
        const double alpha =
            1.0 - std::exp(-constants::two_pi * cfg.material.eddy_corner_frequency / fs);
        double flux = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            const auto n = static_cast<long long>(i) - n_settle;
            const bool on = n >= 0 && (n % (2 * half)) < half;
            const double target = on ? k0 * dc.amplitude * (cfg.dc_ratio_error + drift[i]) : 0.0;
            flux += alpha * (target - flux);
            out.samples[i] = flux;
        }
    }
    return out;
}

TimeSeries sensor_chain(const ComparatorConfig& cfg, const TimeSeries& field) {
    TimeSeries out;
    if (cfg.sensor_mode == SensorMode::tracker) {
        auto tracked = sensor::track_measured_field(field, cfg.sensor, cfg.tracker);
        if (!tracked.ok()) {
            throw LockLossError("tracker: " + std::to_string(tracked.invalid_samples) +
                                " invalid samples (" +
                                (tracked.lock_lost ? "lock lost" : "inside guard band") + ")");
        }
        out = std::move(tracked.estimate);
    } else {
        out = field;
    }
    lowpass_in_place(out.samples, cfg.readout_bandwidth, cfg.sample_rate);
    return out;
}

TimeSeries simulate_measurement(const ComparatorConfig& cfg, const Drive& drive, double duration,
                                const SimulationOptions& options) {
    cfg.validate(max_excitation(drive));
    const std::uint64_t seed = options.seed.value_or(cfg.seed);
    TimeSeries field = residual_flux(cfg, drive, duration, options.settle_time,
                                     derive_seed(seed, {2}));
    const double offset = cfg.offset_field();
    for (double& b : field.samples) {
        b += offset;
    }
    if (options.noise && !cfg.noise.silent()) {
        const auto n = noise::synthesize_noise(cfg.noise, cfg.sample_rate, field.duration(),
                                               derive_seed(seed, {1}));
        for (std::size_t i = 0; i < field.size(); ++i) {
            field.samples[i] += n.samples[i];
        }
    }
    TimeSeries out = sensor_chain(cfg, field);
    const auto n_settle = static_cast<std::ptrdiff_t>(std::llround(options.settle_time * cfg.sample_rate));
    out.samples.erase(out.samples.begin(), out.samples.begin() + n_settle);
    out.start_time = 0.0;
    return out;
}

std::complex<double> readout_response(const ComparatorConfig& cfg, double frequency) {
    if (frequency <= 0.0) {
        return 1.0;
    }
    if (cfg.sensor_mode == SensorMode::ideal) {
        return lowpass_response(cfg.readout_bandwidth, cfg.sample_rate, frequency);
    }
    constexpr double test_amplitude = 10e-9;
    constexpr double settle = 0.05;
    const double duration = std::max(1.0, 50.0 / frequency);
    const double fs = cfg.sample_rate;
    const auto n_settle = static_cast<std::size_t>(std::llround(settle * fs));
    const auto n = n_settle + static_cast<std::size_t>(std::llround(duration * fs));
    TimeSeries field{fs, 0.0, std::vector<double>(n)};
    const double offset = cfg.offset_field();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(n_settle)) / fs;
        field.samples[i] = offset + test_amplitude * std::sin(constants::two_pi * frequency * t);
    }
    TimeSeries out = sensor_chain(cfg, field);
    out.samples.erase(out.samples.begin(),
                      out.samples.begin() + static_cast<std::ptrdiff_t>(n_settle));
    const auto bin = dsp::dft_bin(out, frequency);
    return std::polar(bin.amplitude / test_amplitude, bin.phase);
}

double readout_gain(const ComparatorConfig& cfg, double frequency) {
    return std::abs(readout_response(cfg, frequency));
}

} // namespace nvc::sim
