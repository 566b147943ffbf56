#include "nvc/nvsensor.hpp"

#include "nvc/constants.hpp"
#include "nvc/error.hpp"

#include <cmath>
#include <numbers>

namespace nvc::sensor {

void SensorPhysics::validate() const {
    if (!(gyromagnetic_ratio > 0.0)) {
        throw ValidationError("sensor: gyromagnetic_ratio > 0 violated");
    }
    if (!(contrast > 0.0 && contrast < 1.0)) {
        throw ValidationError("sensor: 0 < contrast < 1 violated");
    }
    if (!(linewidth_fwhm > 0.0)) {
        throw ValidationError("sensor: linewidth_fwhm > 0 violated");
    }
    if (!(photon_rate > 0.0)) {
        throw ValidationError("sensor: photon_rate > 0 violated");
    }
    if (!(zero_field_splitting > 0.0)) {
        throw ValidationError("sensor: zero_field_splitting > 0 violated");
    }
}

void TrackerConfig::validate(double sample_rate) const {
    if (!(fm_deviation > 0.0 && multiplex_period > 0.0 && loop_gain > 0.0 &&
          loop_bandwidth > 0.0)) {
        throw ValidationError("tracker: fm_deviation, multiplex_period, loop_gain and "
                              "loop_bandwidth must all be positive");
    }
    if (!(loop_bandwidth < sample_rate / 2.0)) {
        throw ValidationError("tracker: loop_bandwidth < sample_rate / 2 violated");
    }
    // Each resonance is updated half of the time, so the per-update gain doubles.
    const double per_update = loop_gain * 2.0 * constants::two_pi * loop_bandwidth / sample_rate;
    if (per_update > 1.0) {
        throw ValidationError("tracker: loop_gain * 4 pi loop_bandwidth / sample_rate must be "
                              "<= 1 for a monotone discrete loop");
    }
    if (guard_field < 0.0) {
        throw ValidationError("tracker: guard_field must be >= 0");
    }
}

double TrackerConfig::guard(const SensorPhysics& phys) const {
    // Splitting below two linewidths: the two dips merge.
    return guard_field > 0.0 ? guard_field : phys.linewidth_fwhm / phys.gyromagnetic_ratio;
}

Resonances zeeman_resonances(const SensorPhysics& phys, double b_axis) {
    const double shift = phys.gyromagnetic_ratio * b_axis;
    return {phys.zero_field_splitting - shift, phys.zero_field_splitting + shift};
}

double field_from_resonances(const SensorPhysics& phys, double f_minus, double f_plus) {
    return (f_plus - f_minus) / (2.0 * phys.gyromagnetic_ratio);
}

double lorentzian(double detuning, double fwhm) {
    const double x = 2.0 * detuning / fwhm;
    return 1.0 / (1.0 + x * x);
}

double lorentzian_derivative(double detuning, double fwhm) {
    const double x = 2.0 * detuning / fwhm;
    const double d = 1.0 + x * x;
    return -(4.0 * x / fwhm) / (d * d);
}

double odmr_spectrum(const SensorPhysics& phys, double b_axis, double f_mw) {
    if (!(f_mw > 0.0)) {
        throw ValidationError("odmr_spectrum: f_mw must be positive");
    }
    const auto [fm, fp] = zeeman_resonances(phys, b_axis);
    return 1.0 - phys.contrast * (lorentzian(f_mw - fm, phys.linewidth_fwhm) +
                                  lorentzian(f_mw - fp, phys.linewidth_fwhm));
}

FmDiscriminator::FmDiscriminator(const SensorPhysics& phys, double deviation)
    : fwhm_(phys.linewidth_fwhm), contrast_(phys.contrast), deviation_(deviation) {
    phys.validate();
    if (!(deviation > 0.0)) {
        throw ValidationError("fm discriminator: deviation must be positive");
    }
    for (int q = 0; q < quadrature_points; ++q) {
        const double theta = constants::two_pi * (q + 0.5) / quadrature_points;
        sin_theta_[q] = std::sin(theta);
        scaled_offset_[q] = 2.0 * deviation_ * sin_theta_[q] / fwhm_;
    }
    double slope = 0.0;
    for (double s : sin_theta_) {
        slope += lorentzian_derivative(deviation_ * s, fwhm_) * s;
    }
    slope_ = (2.0 * contrast_ / quadrature_points) * slope;
    const double edge = fwhm_ / (2.0 * std::numbers::sqrt3);
    linear_limit_ = std::abs(offset_estimate(edge));
    dip_limit_ = line_signal(edge).dip;
}

double FmDiscriminator::line_response(double detuning) const {
    return line_signal(detuning).response;
}

FmDiscriminator::LineSignal FmDiscriminator::line_signal(double detuning) const {
    // Points q and q + N/2 sit at +u and -u; each pair shares one reciprocal.
    const double x0 = 2.0 * detuning / fwhm_;
    double acc = 0.0;
    double mean = 0.0;
    for (int q = 0; q < quadrature_points / 2; ++q) {
        const double u = scaled_offset_[q];
        const double a = 1.0 + (x0 + u) * (x0 + u);
        const double b = 1.0 + (x0 - u) * (x0 - u);
        const double inv = 1.0 / (a * b);
        acc += sin_theta_[q] * (b - a) * inv;
        mean += (a + b) * inv;
    }
    return {(2.0 * contrast_ / quadrature_points) * acc, contrast_ * mean / quadrature_points};
}

double FmDiscriminator::offset_estimate(double detuning) const {
    return line_response(detuning) / slope_;
}

double fm_error_signal(const SensorPhysics& phys, double b_axis, double f_center,
                       const TrackerConfig& cfg) {
    const FmDiscriminator disc(phys, cfg.fm_deviation);
    const auto [fm, fp] = zeeman_resonances(phys, b_axis);
    return disc.line_response(f_center - fm) + disc.line_response(f_center - fp);
}

double shot_noise_limit(const SensorPhysics& phys) {
    phys.validate();
    return (4.0 / (3.0 * std::numbers::sqrt3)) * phys.linewidth_fwhm /
           (phys.gyromagnetic_ratio * phys.contrast * std::sqrt(phys.photon_rate));
}

} // namespace nvc::sensor
