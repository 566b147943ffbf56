#pragma once

#include "nvc/magcore.hpp"
#include "nvc/noise.hpp"
#include "nvc/nvsensor.hpp"

#include <cstdint>

namespace nvc::sim {

enum class SensorMode {
    tracker, ///< closed-loop multiplexed FM tracking
    ideal,   ///< sensor output equals the field (tracker bypassed)
};

/// Random-walk wander of the injected ratio error, in 1/sqrt(s).
/// Increments over dt have standard deviation coefficient * sqrt(dt).
struct RatioDrift {
    double ac = 0.0;
    double dc = 0.0;

    bool operator==(const RatioDrift&) const = default;
};

struct ComparatorConfig {
    magcore::CoreGeometry geometry;
    magcore::CoreMaterial material;
    magcore::WindingConfig windings;
    magcore::RatioErrorModel injected_ratio_error{42.5e-6, 0.5e-6};
    double dc_ratio_error = 1.5e-7;
    RatioDrift ratio_drift;
    noise::NoiseModel noise;
    sensor::SensorPhysics sensor;
    sensor::TrackerConfig tracker;
    SensorMode sensor_mode = SensorMode::tracker;
    double readout_bandwidth = 300.0; ///< Hz, first-order low-pass on the sensor output; 0 = off
    double auxiliary_current = 0.16;  ///< A, through the auxiliary winding (offset field)
    double sample_rate = 1.0e4;       ///< Hz
    std::uint64_t seed = 1;

    /// Throws ValidationError naming the violated invariant (including the guard band).
    /// `max_excitation` is the highest drive frequency that will be used.
    void validate(double max_excitation = 0.0) const;

    /// Field from the auxiliary winding [T].
    [[nodiscard]] double offset_field() const;

    /// K(f) for the ratio windings [T/A].
    [[nodiscard]] double conversion(double frequency) const;

    /// Injected AC ratio error at `frequency`.
    [[nodiscard]] double ratio_error(double frequency) const;

    bool operator==(const ComparatorConfig&) const = default;
};

/// Shipped calibration: 10/6/2 cm core with a 2 cm gap, 10-turn windings,
/// eps(67 Hz) = 76 uA/A, DC error 150 nA/A and the sensitive-mode noise model.
ComparatorConfig calibrated_defaults();

/// Sensitive-mode noise: 300 pT/sqrt(Hz) at 67 Hz with a flicker knee putting the
/// square-wave band (0.5 Hz) at sqrt(40) times that, plus 50/60 Hz line spurs.
noise::NoiseModel sensitive_noise_model();

/// Same config running `factor` times faster (see run_allan_campaign). The sensor
/// is forced to ideal mode and the readout filter is dropped if it would exceed
/// 0.45 * sample_rate.
ComparatorConfig time_compressed(const ComparatorConfig& cfg, double factor);

} // namespace nvc::sim
