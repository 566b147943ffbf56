#pragma once

// NV-ensemble magnetometer physics: Zeeman-split ODMR lines, the FM lock-in
// discriminator and the cw-ODMR shot-noise floor.
//
// Only the NV axis parallel to the gap field is modelled. Lines are unit-peak
// Lorentzians without hyperfine structure.

#include <array>
#include <vector>

namespace nvc::sensor {

struct SensorPhysics {
    double zero_field_splitting = 2.87e9;  ///< D [Hz]
    double gyromagnetic_ratio = 28.024e9;  ///< gamma [Hz/T]
    double contrast = 0.01;                ///< C
    double linewidth_fwhm = 1.0e6;         ///< [Hz]
    double photon_rate = 1.0e15;           ///< detected photons per second

    void validate() const;

    bool operator==(const SensorPhysics&) const = default;
};

struct TrackerConfig {
    double fm_deviation = 1.0e5;      ///< Hz
    double multiplex_period = 1.0e-4; ///< s spent on each resonance before switching
    double loop_gain = 1.0;           ///< multiplies the nominal integrator gain
    double loop_bandwidth = 500.0;    ///< Hz, closed-loop first-order bandwidth
    /// |b| below this is the nonlinear region near zero field [T]; 0 selects linewidth/gamma.
    double guard_field = 0.0;

    void validate(double sample_rate) const;
    [[nodiscard]] double guard(const SensorPhysics& phys) const;

    bool operator==(const TrackerConfig&) const = default;
};

struct Resonances {
    double minus; ///< Hz
    double plus;  ///< Hz
};

/// f± = D ± gamma * b.
Resonances zeeman_resonances(const SensorPhysics& phys, double b_axis);

/// Inverse of zeeman_resonances: (f+ - f-) / (2 gamma).
double field_from_resonances(const SensorPhysics& phys, double f_minus, double f_plus);

/// Unit-peak Lorentzian of full width `fwhm` evaluated at `detuning`.
double lorentzian(double detuning, double fwhm);

/// d lorentzian / d detuning.
double lorentzian_derivative(double detuning, double fwhm);

/// Normalised photoluminescence 1 - C [L(f - f-) + L(f - f+)].
double odmr_spectrum(const SensorPhysics& phys, double b_axis, double f_mw);

/// First-harmonic lock-in output for sinusoidal FM of depth `deviation` about a carrier.
///
/// Sign convention: output = -(first harmonic of PL), which is positive below a
/// resonance and negative above it, so the slope versus carrier frequency is
/// negative (restoring). For small deviation the output is ~ -deviation * dPL/df.
class FmDiscriminator {
public:
    static constexpr int quadrature_points = 16;

    FmDiscriminator(const SensorPhysics& phys, double deviation);

    /// Contribution of one line at carrier detuning `detuning` = f_carrier - f_line.
    [[nodiscard]] double line_response(double detuning) const;

    struct LineSignal {
        double response; ///< as line_response
        double dip;      ///< modulation-averaged PL dip, C * <L>
    };

    /// Lock-in output and DC fluorescence dip of one line in a single pass.
    [[nodiscard]] LineSignal line_signal(double detuning) const;

    /// d line_response / d detuning at zero detuning (negative).
    [[nodiscard]] double slope_at_center() const noexcept { return slope_; }

    /// line_response(detuning) / slope_at_center, the discriminator's frequency-offset estimate.
    [[nodiscard]] double offset_estimate(double detuning) const;

    /// Largest |offset_estimate| reached inside the linear region |detuning| < fwhm / (2 sqrt 3).
    [[nodiscard]] double linear_limit() const noexcept { return linear_limit_; }

    /// PL dip at the edge of the linear region; a shallower dip means the carrier
    /// sits in a line's tail, where the error signal alone can look small.
    [[nodiscard]] double dip_limit() const noexcept { return dip_limit_; }

    [[nodiscard]] double deviation() const noexcept { return deviation_; }

private:
    double fwhm_;
    double contrast_;
    double deviation_;
    std::array<double, quadrature_points> sin_theta_{};
    std::array<double, quadrature_points> scaled_offset_{}; ///< 2 deviation sin(theta) / fwhm
    double slope_ = 0.0;
    double linear_limit_ = 0.0;
    double dip_limit_ = 0.0;
};

/// Demodulated error for a carrier at absolute frequency `f_center` with both lines present.
double fm_error_signal(const SensorPhysics& phys, double b_axis, double f_center,
                       const TrackerConfig& cfg);

/// cw-ODMR photon-shot-noise limited sensitivity (4 / (3 sqrt 3)) * linewidth / (gamma C sqrt R) [T/sqrt(Hz)].
double shot_noise_limit(const SensorPhysics& phys);

} // namespace nvc::sensor
