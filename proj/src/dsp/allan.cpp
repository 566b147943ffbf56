#include "nvc/dsp/allan.hpp"

#include "nvc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nvc::dsp {

double AllanCurve::relative_confidence(std::size_t i) const {
    return 1.0 / std::sqrt(static_cast<double>(pair_counts.at(i)));
}

AllanCurve allan_deviation(const TimeSeries& series, std::span<const double> taus) {
    validate(series);
    const std::size_t n = series.size();
    const double dt = series.sample_period();

    // Prefix sums of the mean-removed series; the estimator is offset invariant.
    long double mean = 0.0L;
    for (double x : series.samples) {
        mean += x;
    }
    mean /= static_cast<long double>(n);
    std::vector<long double> prefix(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + (static_cast<long double>(series.samples[i]) - mean);
    }

    std::vector<double> sorted(taus.begin(), taus.end());
    std::sort(sorted.begin(), sorted.end());

    AllanCurve curve;
    std::size_t last_m = 0;
    for (double tau : sorted) {
        if (!(tau > 0.0)) {
            throw ValidationError("allan_deviation: taus must be positive");
        }
        const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(tau / dt)));
        if (3 * m > n) {
            curve.omitted_taus.push_back(tau);
            continue;
        }
        if (m == last_m) {
            continue;
        }
        last_m = m;
        const std::size_t pairs = n - 2 * m + 1;
        long double acc = 0.0L;
        const auto lm = static_cast<long double>(m);
        for (std::size_t k = 0; k < pairs; ++k) {
            const long double y0 = (prefix[k + m] - prefix[k]) / lm;
            const long double y1 = (prefix[k + 2 * m] - prefix[k + m]) / lm;
            acc += (y1 - y0) * (y1 - y0);
        }
        const long double var = acc / (2.0L * static_cast<long double>(pairs));
        curve.taus.push_back(static_cast<double>(m) * dt);
        curve.sigmas.push_back(static_cast<double>(std::sqrt(var)));
        curve.averaging_factors.push_back(m);
        curve.pair_counts.push_back(pairs);
    }
    return curve;
}

std::vector<double> log_spaced_taus(double tau_min, double tau_max, int per_decade) {
    if (!(tau_min > 0.0) || !(tau_max >= tau_min) || per_decade < 1) {
        throw ValidationError("log_spaced_taus: need 0 < tau_min <= tau_max and per_decade >= 1");
    }
    std::vector<double> out;
    const double step = 1.0 / per_decade;
    const double lo = std::log10(tau_min);
    const double hi = std::log10(tau_max);
    for (int i = 0;; ++i) {
        const double e = lo + i * step;
        if (e > hi + 1e-12) {
            break;
        }
        out.push_back(std::pow(10.0, e));
    }
    return out;
}

double white_allan_deviation(double density, double tau) {
    return density / std::sqrt(2.0 * tau);
}

double mean_resolution(double density, double integration_time) {
    return density / std::sqrt(integration_time);
}

std::string to_string(NoiseRegime regime) {
    switch (regime) {
    case NoiseRegime::white:
        return "white";
    case NoiseRegime::flicker:
        return "flicker";
    case NoiseRegime::random_walk:
        return "random-walk";
    }
    return "unknown";
}

NoiseRegime classify_slope(double slope) {
    if (slope < -0.25) {
        return NoiseRegime::white;
    }
    if (slope > 0.25) {
        return NoiseRegime::random_walk;
    }
    return NoiseRegime::flicker;
}

namespace {

double slope_of(std::span<const double> lx, std::span<const double> ly) {
    const auto n = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

double loglog_slope(const AllanCurve& curve, double tau_lo, double tau_hi) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (curve.taus[i] >= tau_lo && curve.taus[i] <= tau_hi) {
            if (!(curve.sigmas[i] > 0.0)) {
                throw ValidationError("loglog_slope: zero deviation has no logarithm");
            }
            lx.push_back(std::log10(curve.taus[i]));
            ly.push_back(std::log10(curve.sigmas[i]));
        }
    }
    if (lx.size() < 2) {
        throw ValidationError("loglog_slope: fewer than two points in range");
    }
    return slope_of(lx, ly);
}

std::vector<DecadeSlope> noise_slope_id(const AllanCurve& curve) {
    std::vector<DecadeSlope> out;
    std::size_t i = 0;
    while (i < curve.size()) {
        const double decade = std::floor(std::log10(curve.taus[i]) + 1e-9);
        std::vector<double> lx;
        std::vector<double> ly;
        std::size_t j = i;
        bool has_zero = false;
        for (; j < curve.size() && std::floor(std::log10(curve.taus[j]) + 1e-9) == decade; ++j) {
            has_zero = has_zero || !(curve.sigmas[j] > 0.0);
            lx.push_back(std::log10(curve.taus[j]));
            ly.push_back(has_zero ? 0.0 : std::log10(curve.sigmas[j]));
        }
        if (lx.size() >= 4) {
            DecadeSlope d;
            d.tau_lo = std::pow(10.0, decade);
            d.tau_hi = std::pow(10.0, decade + 1.0);
            d.points = lx.size();
            // An all-zero stretch (noiseless input) is flat by definition.
            d.slope = has_zero ? 0.0 : slope_of(lx, ly);
            d.regime = classify_slope(d.slope);
            out.push_back(d);
        }
        i = j;
    }
    if (out.empty()) {
        throw ValidationError("noise_slope_id: no decade holds at least 4 points");
    }
    return out;
}

AllanMinimum allan_minimum(const AllanCurve& curve) {
    if (curve.size() == 0) {
        throw ValidationError("allan_minimum: empty curve");
    }
    const auto it = std::min_element(curve.sigmas.begin(), curve.sigmas.end());
    const auto idx = static_cast<std::size_t>(it - curve.sigmas.begin());
    return {curve.taus[idx], *it, idx};
}

} // namespace nvc::dsp
