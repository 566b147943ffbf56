#pragma once

// Time-domain multiplexed FM tracking of both Zeeman resonances.
//
// Every `multiplex_period` the carrier switches between the f- and f+ lock
// points. While a lock point is active its discriminator output (with the
// other line's predicted contribution removed) drives a first-order
// integrator; the field estimate is (f+ - f-) / (2 gamma).

#include "nvc/noise.hpp"
#include "nvc/nvsensor.hpp"
#include "nvc/timeseries.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nvc::sensor {

struct TrackResult {
    TimeSeries estimate;              ///< b-hat [T]
    std::vector<std::uint8_t> valid;  ///< 0 where lock was lost or |b-hat| is inside the guard band
    bool lock_lost = false;           ///< discriminator left its linear range at least once
    bool nonlinear_region = false;    ///< |b-hat| fell below the guard field at least once
    std::size_t invalid_samples = 0;

    [[nodiscard]] bool ok() const noexcept { return invalid_samples == 0; }
};

class ResonanceTracker {
public:
    ResonanceTracker(const SensorPhysics& phys, const TrackerConfig& cfg, double sample_rate,
                     double initial_field);

    struct Step {
        double field;     ///< T
        bool in_range;    ///< error signal inside its linear range and PL dip deep enough
        bool outside_guard;
    };

    /// Advance one sample with the sensor exposed to `field` [T].
    Step step(double field);

    [[nodiscard]] double field_estimate() const noexcept;

private:
    SensorPhysics phys_;
    FmDiscriminator disc_;
    double gain_;
    double guard_;
    std::size_t slot_len_;
    std::size_t counter_ = 0;
    // Lock points stored relative to D to keep sub-hertz resolution.
    double minus_offset_;
    double plus_offset_;
};

/// Track a field that already contains any sensor noise.
TrackResult track_measured_field(const TimeSeries& field, const SensorPhysics& phys,
                                 const TrackerConfig& cfg,
                                 std::optional<double> initial_field = std::nullopt);

/// Add a noise realisation (seeded) to `true_field` and track it.
TrackResult track_field(const TimeSeries& true_field, const SensorPhysics& phys,
                        const TrackerConfig& cfg, const noise::NoiseModel& noise,
                        std::uint64_t seed, std::optional<double> initial_field = std::nullopt);

} // namespace nvc::sensor
