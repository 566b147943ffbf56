#include "nvc/dsp/square_wave.hpp"

#include "nvc/error.hpp"

#include <cmath>

namespace nvc::dsp {

void SquareWaveProtocol::validate() const {
    if (!(half_period > 0.0)) {
        throw ValidationError("square wave: half_period > 0 violated");
    }
    if (!(transient_exclusion >= 0.0 && transient_exclusion < half_period)) {
        throw ValidationError("square wave: 0 <= transient_exclusion < half_period violated");
    }
    if (cycles < 1) {
        throw ValidationError("square wave: cycles >= 1 violated");
    }
}

SquareWaveResult square_wave_extract(const TimeSeries& series, const SquareWaveProtocol& proto) {
    validate(series);
    proto.validate();
    const double fs = series.sample_rate;
    const auto half = static_cast<std::size_t>(std::llround(proto.half_period * fs));
    const auto skip = static_cast<std::size_t>(std::llround(proto.transient_exclusion * fs));
    if (half == 0 || skip >= half) {
        throw ValidationError("square wave: transient exclusion leaves no samples at this rate");
    }
    const std::size_t available = series.size() / (2 * half);
    const std::size_t n = std::min(available, static_cast<std::size_t>(proto.cycles));
    if (n < 1) {
        throw ValidationError("square wave: fewer than one complete cycle in the series");
    }

    auto window_mean = [&](std::size_t begin, std::size_t end) {
        long double acc = 0.0L;
        for (std::size_t i = begin; i < end; ++i) {
            acc += series.samples[i];
        }
        return acc / static_cast<long double>(end - begin);
    };

    SquareWaveResult r;
    r.cycles_used = n;
    r.per_cycle.reserve(n);
    long double off_total = 0.0L;
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t start = c * 2 * half;
        const long double on = window_mean(start + skip, start + half);
        const long double off = window_mean(start + half + skip, start + 2 * half);
        off_total += off;
        r.per_cycle.push_back(static_cast<double>(on - off));
    }
    long double mean = 0.0L;
    for (double d : r.per_cycle) {
        mean += d;
    }
    mean /= static_cast<long double>(n);
    r.step = static_cast<double>(mean);
    r.off_mean = static_cast<double>(off_total / static_cast<long double>(n));
    if (n > 1) {
        long double ss = 0.0L;
        for (double d : r.per_cycle) {
            ss += (d - mean) * (d - mean);
        }
        const long double var = ss / static_cast<long double>(n - 1);
        r.standard_error = static_cast<double>(std::sqrt(var / static_cast<long double>(n)));
    }
    return r;
}

} // namespace nvc::dsp
