#pragma once

#include "nvc/timeseries.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nvc::dsp {

struct AllanCurve {
    std::vector<double> taus;                    ///< s, snapped to whole samples, strictly increasing
    std::vector<double> sigmas;                  ///< same unit as the series
    std::vector<std::size_t> averaging_factors;  ///< samples per tau
    std::vector<std::size_t> pair_counts;        ///< overlapping difference pairs
    std::vector<double> omitted_taus;            ///< requested taus longer than duration / 3

    [[nodiscard]] std::size_t size() const noexcept { return taus.size(); }
    /// Relative 1-sigma error bar, 1 / sqrt(pairs).
    [[nodiscard]] double relative_confidence(std::size_t i) const;

    bool operator==(const AllanCurve&) const = default;
};

/// Overlapping Allan deviation of the averaged series.
///
///   sigma^2(tau) = 1 / (2 P) * sum_k (ybar_{k+m} - ybar_k)^2,  P = N - 2m + 1
///
/// with ybar_k the mean of m = round(tau fs) samples starting at k. White noise of
/// one-sided density d gives d / sqrt(2 tau).
AllanCurve allan_deviation(const TimeSeries& series, std::span<const double> taus);

/// Log-spaced taus from tau_min to tau_max, `per_decade` points per decade.
std::vector<double> log_spaced_taus(double tau_min, double tau_max, int per_decade);

/// d / sqrt(2 tau): Allan deviation of white noise with one-sided density d.
double white_allan_deviation(double density, double tau);

/// d / sqrt(t): the averaging-time convention behind the required integration time.
double mean_resolution(double density, double integration_time);

enum class NoiseRegime { white, flicker, random_walk };

std::string to_string(NoiseRegime regime);

/// Nearest of -1/2, 0, +1/2.
NoiseRegime classify_slope(double slope);

struct DecadeSlope {
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    double slope = 0.0;
    std::size_t points = 0;
    NoiseRegime regime = NoiseRegime::white;

    bool operator==(const DecadeSlope&) const = default;
};

/// Least-squares log-log slope in every decade holding >= 4 points.
/// Throws ValidationError when no decade qualifies.
std::vector<DecadeSlope> noise_slope_id(const AllanCurve& curve);

/// Least-squares slope of log sigma vs log tau over taus in [tau_lo, tau_hi].
double loglog_slope(const AllanCurve& curve, double tau_lo, double tau_hi);

struct AllanMinimum {
    double tau = 0.0;
    double sigma = 0.0;
    std::size_t index = 0;
};

AllanMinimum allan_minimum(const AllanCurve& curve);

} // namespace nvc::dsp
