#include "nvc/tracker.hpp"

#include "nvc/constants.hpp"
#include "nvc/error.hpp"

#include <algorithm>
#include <cmath>

namespace nvc::sensor {

ResonanceTracker::ResonanceTracker(const SensorPhysics& phys, const TrackerConfig& cfg,
                                   double sample_rate, double initial_field)
    : phys_(phys), disc_(phys, cfg.fm_deviation) {
    phys.validate();
    cfg.validate(sample_rate);
    if (!(cfg.fm_deviation < phys.linewidth_fwhm)) {
        throw ValidationError("tracker: fm_deviation < linewidth required");
    }
    gain_ = cfg.loop_gain * 2.0 * constants::two_pi * cfg.loop_bandwidth / sample_rate;
    guard_ = cfg.guard(phys);
    slot_len_ = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.multiplex_period * sample_rate)));
    minus_offset_ = -phys.gyromagnetic_ratio * initial_field;
    plus_offset_ = phys.gyromagnetic_ratio * initial_field;
}

double ResonanceTracker::field_estimate() const noexcept {
    return (plus_offset_ - minus_offset_) / (2.0 * phys_.gyromagnetic_ratio);
}

ResonanceTracker::Step ResonanceTracker::step(double field) {
    const bool on_plus = (counter_ / slot_len_) % 2 == 1;
    ++counter_;
    double& active = on_plus ? plus_offset_ : minus_offset_;
    const double other = on_plus ? minus_offset_ : plus_offset_;

    const double shift = phys_.gyromagnetic_ratio * field;
    const auto lo = disc_.line_signal(active + shift);
    const auto hi = disc_.line_signal(active - shift);
    // Remove the other line's pull using the loop's own estimate of where it sits.
    const auto predicted = disc_.line_signal(active - other);
    const double error = lo.response + hi.response - predicted.response;
    const double dip = lo.dip + hi.dip - predicted.dip;
    const double offset = error / disc_.slope_at_center();
    const bool in_range = std::abs(offset) <= disc_.linear_limit() && dip >= disc_.dip_limit();
    active -= gain_ * offset;

    const double estimate = field_estimate();
    return {estimate, in_range, std::abs(estimate) >= guard_};
}

TrackResult track_measured_field(const TimeSeries& field, const SensorPhysics& phys,
                                 const TrackerConfig& cfg, std::optional<double> initial_field) {
    validate(field);
    ResonanceTracker tracker(phys, cfg, field.sample_rate,
                             initial_field.value_or(field.samples.front()));
    TrackResult result;
    result.estimate.sample_rate = field.sample_rate;
    result.estimate.start_time = field.start_time;
    result.estimate.samples.reserve(field.size());
    result.valid.reserve(field.size());
    for (double b : field.samples) {
        const auto s = tracker.step(b);
        result.estimate.samples.push_back(s.field);
        const bool ok = s.in_range && s.outside_guard;
        result.valid.push_back(ok ? 1 : 0);
        result.lock_lost = result.lock_lost || !s.in_range;
        result.nonlinear_region = result.nonlinear_region || !s.outside_guard;
        if (!ok) {
            ++result.invalid_samples;
        }
    }
    return result;
}

TrackResult track_field(const TimeSeries& true_field, const SensorPhysics& phys,
                        const TrackerConfig& cfg, const noise::NoiseModel& noise,
                        std::uint64_t seed, std::optional<double> initial_field) {
    validate(true_field);
    TimeSeries measured = true_field;
    if (!noise.silent()) {
        const auto n = noise::synthesize_noise(noise, true_field.sample_rate,
                                               true_field.duration(), seed);
        for (std::size_t i = 0; i < measured.size() && i < n.size(); ++i) {
            measured.samples[i] += n.samples[i];
        }
    }
    return track_measured_field(measured, phys, cfg,
                                initial_field.value_or(true_field.samples.front()));
}

} // namespace nvc::sensor
