#include "nvc/sim/config.hpp"

#include "nvc/error.hpp"

#include <cmath>
#include <string>

namespace nvc::sim {

void ComparatorConfig::validate(double max_excitation) const {
    geometry.validate();
    material.validate();
    windings.validate();
    noise.validate();
    sensor.validate();
    if (windings.primary_turns < 1) {
        throw ValidationError("windings: primary_turns >= 1 required");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw ValidationError("sample_rate > 0 violated");
    }
    if (!(sample_rate > 2.0 * max_excitation)) {
        throw ValidationError("sample_rate > 2 x max excitation frequency violated");
    }
    if (!(readout_bandwidth >= 0.0 && readout_bandwidth < sample_rate / 2.0)) {
        throw ValidationError("readout_bandwidth must be in [0, sample_rate / 2)");
    }
    if (!(ratio_drift.ac >= 0.0 && ratio_drift.dc >= 0.0)) {
        throw ValidationError("ratio_drift coefficients must be >= 0");
    }
    if (sensor_mode == SensorMode::tracker) {
        tracker.validate(sample_rate);
    }
    const double guard = tracker.guard(sensor);
    if (std::abs(offset_field()) < guard) {
        throw ValidationError("offset field " + std::to_string(offset_field()) +
                              " T lies inside the nonlinear guard band |b| < " +
                              std::to_string(guard) + " T; raise auxiliary_current");
    }
}

double ComparatorConfig::offset_field() const {
    return magcore::gap_flux_density(geometry, material,
                                     static_cast<double>(windings.auxiliary_turns) *
                                         auxiliary_current);
}

double ComparatorConfig::conversion(double frequency) const {
    return magcore::conversion_coefficient(geometry, material, windings.primary_turns, frequency);
}

double ComparatorConfig::ratio_error(double frequency) const {
    return magcore::ratio_error_model(frequency, injected_ratio_error);
}

noise::NoiseModel sensitive_noise_model() {
    constexpr double level_67hz = 300e-12;
    constexpr double excitation = 67.0;
    constexpr double square_wave_band = 0.5;
    noise::NoiseModel m;
    m.flicker_knee = noise::flicker_knee_for_ratio(square_wave_band, excitation, std::sqrt(40.0));
    m.white_asd = level_67hz / std::sqrt(1.0 + m.flicker_knee / excitation);
    m.random_walk_asd = 0.0;
    m.line_spurs = {{50.0, 2e-9}, {60.0, 2e-9}};
    return m;
}

ComparatorConfig calibrated_defaults() {
    ComparatorConfig cfg;
    cfg.geometry = {0.10, 0.06, 0.02, 0.02};
    cfg.material = {3.0e4, 89.33, 0.0};
    cfg.windings = {10, 10, 10};
    cfg.injected_ratio_error = {42.5e-6, 0.5e-6};
    cfg.dc_ratio_error = 1.5e-7;
    cfg.ratio_drift = {2.07e-9, 4.1e-10};
    cfg.noise = sensitive_noise_model();
    cfg.sensor = {};
    cfg.tracker = {};
    cfg.sensor_mode = SensorMode::tracker;
    cfg.readout_bandwidth = 300.0;
    cfg.auxiliary_current = 0.16;
    cfg.sample_rate = 1.0e4;
    cfg.seed = 20251016;
    return cfg;
}

ComparatorConfig time_compressed(const ComparatorConfig& cfg, double factor) {
    if (!(factor >= 1.0)) {
        throw ValidationError("time compression factor must be >= 1");
    }
    ComparatorConfig out = cfg;
    out.noise = noise::time_compressed(cfg.noise, factor);
    out.ratio_drift.ac = cfg.ratio_drift.ac * std::sqrt(factor);
    out.ratio_drift.dc = cfg.ratio_drift.dc * std::sqrt(factor);
    out.material.eddy_corner_frequency = cfg.material.eddy_corner_frequency * factor;
    out.injected_ratio_error.eddy_per_hz = cfg.injected_ratio_error.eddy_per_hz / factor;
    out.readout_bandwidth = cfg.readout_bandwidth * factor;
    if (out.readout_bandwidth >= 0.45 * cfg.sample_rate) {
        out.readout_bandwidth = 0.0;
    }
    if (factor > 1.0) {
        out.sensor_mode = SensorMode::ideal;
    }
    return out;
}

} // namespace nvc::sim
