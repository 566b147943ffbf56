#pragma once

#include "nvc/timeseries.hpp"

#include <cstddef>
#include <vector>

namespace nvc::dsp {

/// On/off excitation: each cycle is `half_period` on followed by `half_period` off.
struct SquareWaveProtocol {
    double half_period = 1.0;         ///< s
    double transient_exclusion = 0.5; ///< s discarded after every edge
    int cycles = 1;

    void validate() const;

    bool operator==(const SquareWaveProtocol&) const = default;
};

struct SquareWaveResult {
    double step = 0.0;            ///< mean(on) - mean(off), averaged over cycles
    double standard_error = 0.0;  ///< of the cycle mean; 0 with a single cycle
    double off_mean = 0.0;        ///< baseline of the off windows
    std::size_t cycles_used = 0;
    std::vector<double> per_cycle;
};

/// Protocol-synchronous differencing. The series must start on a rising edge.
/// Uses min(proto.cycles, complete cycles in the series).
SquareWaveResult square_wave_extract(const TimeSeries& series, const SquareWaveProtocol& proto);

} // namespace nvc::dsp
