#include "nvc/noise.hpp"

#include "nvc/constants.hpp"
#include "nvc/error.hpp"
#include "nvc/fft.hpp"
#include "nvc/tone.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace nvc::noise {

void NoiseModel::validate() const {
    if (!(white_asd >= 0.0 && flicker_knee >= 0.0 && random_walk_asd >= 0.0)) {
        throw ValidationError("noise: amplitude parameters must be >= 0");
    }
    for (const auto& s : line_spurs) {
        if (!(s.frequency > 0.0)) {
            throw ValidationError("noise: spur frequencies must be > 0");
        }
        if (!(s.amplitude >= 0.0)) {
            throw ValidationError("noise: spur amplitudes must be >= 0");
        }
    }
}

bool NoiseModel::silent() const noexcept {
    const bool no_spurs = std::all_of(line_spurs.begin(), line_spurs.end(),
                                      [](const LineSpur& s) { return s.amplitude == 0.0; });
    return white_asd == 0.0 && random_walk_asd == 0.0 && no_spurs;
}

double NoiseModel::psd(double frequency) const {
    const double w2 = white_asd * white_asd;
    return w2 * (1.0 + flicker_knee / frequency) +
           random_walk_asd * random_walk_asd / (frequency * frequency);
}

double NoiseModel::asd(double frequency) const {
    return std::sqrt(psd(frequency));
}

NoiseModel time_compressed(const NoiseModel& model, double factor) {
    if (!(factor > 0.0)) {
        throw ValidationError("time compression factor must be positive");
    }
    NoiseModel out = model;
    out.white_asd = model.white_asd / std::sqrt(factor);
    out.flicker_knee = model.flicker_knee * factor;
    out.random_walk_asd = model.random_walk_asd * std::sqrt(factor);
    for (auto& s : out.line_spurs) {
        s.frequency *= factor;
    }
    return out;
}

double flicker_knee_for_ratio(double f_low, double f_high, double ratio) {
    // ratio^2 (1 + k/f_high) = 1 + k/f_low
    const double r2 = ratio * ratio;
    const double denom = 1.0 / f_low - r2 / f_high;
    if (!(f_low > 0.0 && f_high > f_low && ratio >= 1.0 && denom > 0.0)) {
        throw ValidationError("flicker_knee_for_ratio: no non-negative knee for these inputs");
    }
    return (r2 - 1.0) / denom;
}

TimeSeries synthesize_noise(const NoiseModel& model, double sample_rate, double duration,
                            std::uint64_t seed) {
    model.validate();
    if (!(sample_rate > 0.0) || !(duration * sample_rate >= 2.0)) {
        throw ValidationError("synthesize_noise: duration * sample_rate >= 2 required");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    TimeSeries out{sample_rate, 0.0, std::vector<double>(n, 0.0)};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    if (model.white_asd > 0.0) {
        const double sigma = model.white_asd * std::sqrt(sample_rate / 2.0);
        for (auto& x : out.samples) {
            x = sigma * gauss(rng);
        }
    }

    const bool flicker = model.white_asd > 0.0 && model.flicker_knee > 0.0;
    if (flicker || model.random_walk_asd > 0.0) {
        const std::size_t m = fft::good_size(n);
        const double w2k = model.white_asd * model.white_asd * model.flicker_knee;
        const double rw2 = model.random_walk_asd * model.random_walk_asd;
        std::vector<std::complex<double>> bins(m / 2 + 1);
        for (std::size_t k = 1; k < bins.size(); ++k) {
            const double f = static_cast<double>(k) * sample_rate / static_cast<double>(m);
            const double s = (flicker ? w2k / f : 0.0) + rw2 / (f * f);
            // E|X_k|^2 = m fs S / 2 for the unnormalised DFT of a length-m record.
            const double amp = std::sqrt(static_cast<double>(m) * sample_rate * s / 2.0);
            if (2 * k == m) {
                bins[k] = amp * gauss(rng);
            } else {
                const double re = gauss(rng);
                const double im = gauss(rng);
                bins[k] = amp * std::complex<double>(re, im) / std::numbers::sqrt2;
            }
        }
        const auto colored = fft::inverse_real(bins, m);
        const double scale = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < n; ++i) {
            out.samples[i] += colored[i] * scale;
        }
    }

    std::uniform_real_distribution<double> phase_dist(0.0, constants::two_pi);
    std::vector<double> tone(n);
    for (const auto& spur : model.line_spurs) {
        const double phase = phase_dist(rng);
        if (spur.amplitude == 0.0 || spur.frequency >= sample_rate / 2.0) {
            continue;
        }
        fill_sine(tone, spur.frequency / sample_rate, 0, phase);
        for (std::size_t i = 0; i < n; ++i) {
            out.samples[i] += spur.amplitude * tone[i];
        }
    }
    return out;
}

AsdCurve psd_estimate(const TimeSeries& series, std::size_t segment_length) {
    validate(series);
    if (segment_length < 2 || series.size() < 2 * segment_length) {
        throw ValidationError("psd_estimate: series length must be >= 2 * segment_length");
    }
    const std::size_t len = segment_length;
    const std::size_t step = len / 2;
    std::vector<double> window(len);
    double wsum2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(constants::two_pi * static_cast<double>(i) /
                                          static_cast<double>(len)));
        wsum2 += window[i] * window[i];
    }
    const std::size_t nbins = len / 2 + 1;
    std::vector<double> power(nbins, 0.0);
    std::vector<double> seg(len);
    std::size_t segments = 0;
    for (std::size_t start = 0; start + len <= series.size(); start += step) {
        double mean = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            mean += series.samples[start + i];
        }
        mean /= static_cast<double>(len);
        for (std::size_t i = 0; i < len; ++i) {
            seg[i] = (series.samples[start + i] - mean) * window[i];
        }
        const auto spec = fft::forward_real(seg);
        for (std::size_t k = 0; k < nbins; ++k) {
            power[k] += std::norm(spec[k]);
        }
        ++segments;
    }
    AsdCurve curve;
    curve.segments = segments;
    curve.frequencies.resize(nbins);
    curve.asd.resize(nbins);
    const double fs = series.sample_rate;
    for (std::size_t k = 0; k < nbins; ++k) {
        const bool edge = k == 0 || 2 * k == len;
        const double scale = (edge ? 1.0 : 2.0) / (fs * wsum2 * static_cast<double>(segments));
        curve.frequencies[k] = static_cast<double>(k) * fs / static_cast<double>(len);
        curve.asd[k] = std::sqrt(power[k] * scale);
    }
    return curve;
}

double band_median(const AsdCurve& curve, double f_lo, double f_hi) {
    std::vector<double> v;
    for (std::size_t k = 0; k < curve.frequencies.size(); ++k) {
        if (curve.frequencies[k] >= f_lo && curve.frequencies[k] <= f_hi) {
            v.push_back(curve.asd[k]);
        }
    }
    if (v.empty()) {
        throw ValidationError("band_median: no bins in band");
    }
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

double tone_amplitude(const AsdCurve& curve, double frequency, int half_width_bins) {
    if (curve.frequencies.size() < 2) {
        throw ValidationError("tone_amplitude: curve too short");
    }
    const double df = curve.frequencies[1] - curve.frequencies[0];
    const auto centre = static_cast<std::ptrdiff_t>(std::llround(frequency / df));
    double power = 0.0;
    for (auto k = centre - half_width_bins; k <= centre + half_width_bins; ++k) {
        if (k < 0 || k >= static_cast<std::ptrdiff_t>(curve.asd.size())) {
            continue;
        }
        power += curve.asd[static_cast<std::size_t>(k)] * curve.asd[static_cast<std::size_t>(k)] * df;
    }
    return std::sqrt(2.0 * power);
}

} // namespace nvc::noise
