#pragma once

#include "nvc/timeseries.hpp"

#include <cstddef>
#include <vector>

namespace nvc::dsp {

/// Single-bin DFT result at the excitation frequency.
struct BinEstimate {
    double amplitude = 0.0;        ///< (2/N) |sum x_n exp(-i 2 pi f0 n / fs)|
    double phase = 0.0;            ///< rad, of the sine-referenced component
    std::size_t samples_used = 0;  ///< window after trimming to whole cycles
    double cycles = 0.0;           ///< N f0 / fs
};

/// Longest prefix length <= n holding a whole number of f0 cycles.
/// Falls back to the nearest whole-cycle length when no exact integer exists.
std::size_t coherent_length(std::size_t n, double sample_rate, double f0);

/// Rectangular-window projection onto f0 over the coherent prefix of `series`.
/// The window mean is removed first; under coherent sampling that changes nothing
/// except rounding.
BinEstimate dft_bin(const TimeSeries& series, double f0);

/// Amplitude of the f0 component (see dft_bin).
double dft_bin_amplitude(const TimeSeries& series, double f0);

/// (2/N) |X_k| for every bin up to `max_frequency`, rectangular window, mean removed.
struct AmplitudeSpectrum {
    std::vector<double> frequencies; ///< Hz
    std::vector<double> amplitudes;  ///< same unit as the series
};

AmplitudeSpectrum amplitude_spectrum(const TimeSeries& series, double max_frequency);

} // namespace nvc::dsp
