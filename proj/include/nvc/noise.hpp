#pragma once

// Parametric magnetic noise: synthesis of realisations and Welch estimation.
//
// One-sided convention throughout:
//   S(f) = w^2 + w^2 * knee / f + rw^2 / f^2   [T^2/Hz]
// plus deterministic line spurs (sinusoids of peak amplitude a_i).

#include "nvc/timeseries.hpp"

#include <cstdint>
#include <vector>

namespace nvc::noise {

struct LineSpur {
    double frequency = 0.0; ///< Hz
    double amplitude = 0.0; ///< T, sinusoid peak

    bool operator==(const LineSpur&) const = default;
};

struct NoiseModel {
    double white_asd = 0.0;       ///< T/sqrt(Hz)
    double flicker_knee = 0.0;    ///< Hz, 1/f and white densities are equal here
    double random_walk_asd = 0.0; ///< T*sqrt(Hz), S contains rw^2/f^2
    std::vector<LineSpur> line_spurs;

    void validate() const;
    [[nodiscard]] bool silent() const noexcept;

    /// One-sided continuum PSD at f > 0 [T^2/Hz], spurs excluded.
    [[nodiscard]] double psd(double frequency) const;
    [[nodiscard]] double asd(double frequency) const;

    bool operator==(const NoiseModel&) const = default;
};

/// The same process run `factor` times faster: every characteristic time divides
/// by `factor` while Allan deviations at correspondingly scaled tau are unchanged.
NoiseModel time_compressed(const NoiseModel& model, double factor);

/// Flicker knee giving asd(f_low) / asd(f_high) == ratio for a white + 1/f model.
double flicker_knee_for_ratio(double f_low, double f_high, double ratio);

/// Zero-mean realisation with one-sided spectrum `model`, deterministic in `seed`.
/// White noise is i.i.d. Gaussian with sigma = w sqrt(fs/2); the 1/f and 1/f^2
/// parts are shaped in the frequency domain; spurs get a random phase and are
/// dropped when above Nyquist.
TimeSeries synthesize_noise(const NoiseModel& model, double sample_rate, double duration,
                            std::uint64_t seed);

struct AsdCurve {
    std::vector<double> frequencies; ///< Hz
    std::vector<double> asd;         ///< T/sqrt(Hz)
    std::size_t segments = 0;
};

/// Averaged periodogram, periodic Hann taper, 50 % overlap, per-segment mean removed.
AsdCurve psd_estimate(const TimeSeries& series, std::size_t segment_length);

/// Median ASD over frequencies in [f_lo, f_hi].
double band_median(const AsdCurve& curve, double f_lo, double f_hi);

/// Peak amplitude of a sinusoid near `frequency`, from the power within +-`half_width_bins`.
double tone_amplitude(const AsdCurve& curve, double frequency, int half_width_bins = 3);

} // namespace nvc::noise
