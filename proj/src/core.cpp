#include "nvc/timeseries.hpp"

#include "nvc/error.hpp"

#include <cmath>

namespace nvc {

void validate(const TimeSeries& series, bool need_samples) {
    if (!(series.sample_rate > 0.0) || !std::isfinite(series.sample_rate)) {
        throw ValidationError("time series: sample_rate must be positive and finite");
    }
    if (need_samples && series.samples.empty()) {
        throw ValidationError("time series: no samples");
    }
}

} // namespace nvc
