#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nvc {

/// Uniformly sampled record. Values are in tesla unless a caller says otherwise
/// (campaign code reuses the type for per-window current sequences).
struct TimeSeries {
    double sample_rate = 0.0; ///< Hz
    double start_time = 0.0;  ///< s
    std::vector<double> samples;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
    [[nodiscard]] double sample_period() const noexcept { return 1.0 / sample_rate; }
    [[nodiscard]] double duration() const noexcept {
        return static_cast<double>(samples.size()) / sample_rate;
    }
    [[nodiscard]] double time_at(std::size_t i) const noexcept {
        return start_time + static_cast<double>(i) / sample_rate;
    }
    [[nodiscard]] std::span<const double> view() const noexcept { return samples; }

    bool operator==(const TimeSeries&) const = default;
};

/// Throws ValidationError unless sample_rate > 0 and, when `need_samples`, the series is non-empty.
void validate(const TimeSeries& series, bool need_samples = true);

} // namespace nvc
