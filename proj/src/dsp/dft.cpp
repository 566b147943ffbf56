#include "nvc/dsp/dft.hpp"

#include "nvc/constants.hpp"
#include "nvc/error.hpp"
#include "nvc/fft.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace nvc::dsp {

std::size_t coherent_length(std::size_t n, double sample_rate, double f0) {
    const double samples_per_cycle = sample_rate / f0;
    const auto max_cycles = static_cast<long long>(std::floor(static_cast<double>(n) / samples_per_cycle));
    for (long long c = max_cycles; c >= 1; --c) {
        const double exact = static_cast<double>(c) * samples_per_cycle;
        const double rounded = std::round(exact);
        if (rounded <= static_cast<double>(n) &&
            std::abs(exact - rounded) <= 1e-9 * std::max(1.0, exact)) {
            return static_cast<std::size_t>(rounded);
        }
    }
    // No exact integer: keep as many whole cycles as fit, rounded to samples.
    const double fallback = std::round(static_cast<double>(max_cycles) * samples_per_cycle);
    return std::min(n, static_cast<std::size_t>(fallback));
}

namespace {

struct Basis {
    std::size_t n = 0;
    double f0 = 0.0;
    double fs = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;
};

// Repeated windows share one basis; keep the last one per thread.
const Basis& basis(std::size_t n, double f0, double fs) {
    thread_local Basis b;
    if (b.n != n || b.f0 != f0 || b.fs != fs) {
        b.n = n;
        b.f0 = f0;
        b.fs = fs;
        b.cos.resize(n);
        b.sin.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double angle = constants::two_pi * constants::cycle_fraction(f0 * static_cast<double>(i) / fs);
            b.cos[i] = std::cos(angle);
            b.sin[i] = std::sin(angle);
        }
    }
    return b;
}

} // namespace

BinEstimate dft_bin(const TimeSeries& series, double f0) {
    validate(series);
    const double fs = series.sample_rate;
    if (!(f0 > 0.0) || !(f0 < fs / 2.0)) {
        throw ValidationError("dft_bin: need 0 < f0 < sample_rate / 2");
    }
    if (static_cast<double>(series.size()) < fs / f0) {
        throw ValidationError("dft_bin: window shorter than one excitation cycle");
    }
    const std::size_t n = coherent_length(series.size(), fs, f0);

    long double mean = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        mean += series.samples[i];
    }
    mean /= static_cast<long double>(n);

    const auto& b = basis(n, f0, fs);
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = static_cast<long double>(series.samples[i]) - mean;
        re += x * b.cos[i];
        im -= x * b.sin[i];
    }
    const double scale = 2.0 / static_cast<double>(n);
    const std::complex<double> bin(static_cast<double>(re) * scale, static_cast<double>(im) * scale);
    // a sin(wt + phi) projects onto (a/2)(sin phi - i cos phi) * 2 => arg = phi - pi/2.
    return {std::abs(bin), std::arg(bin) + constants::two_pi / 4.0, n,
            static_cast<double>(n) * f0 / fs};
}

double dft_bin_amplitude(const TimeSeries& series, double f0) {
    return dft_bin(series, f0).amplitude;
}

AmplitudeSpectrum amplitude_spectrum(const TimeSeries& series, double max_frequency) {
    validate(series);
    const std::size_t n = series.size();
    double mean = 0.0;
    for (double x : series.samples) {
        mean += x;
    }
    mean /= static_cast<double>(n);
    std::vector<double> centred(series.samples);
    for (double& x : centred) {
        x -= mean;
    }
    const auto bins = fft::forward_real(centred);
    AmplitudeSpectrum out;
    const double df = series.sample_rate / static_cast<double>(n);
    for (std::size_t k = 1; k < bins.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        if (f > max_frequency) {
            break;
        }
        const bool nyquist = 2 * k == n;
        out.frequencies.push_back(f);
        out.amplitudes.push_back(std::abs(bins[k]) * (nyquist ? 1.0 : 2.0) / static_cast<double>(n));
    }
    return out;
}

} // namespace nvc::dsp
