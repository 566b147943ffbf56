#pragma once

// Magnetic equivalent circuit of an air-gapped toroidal core.
//
// The gap is treated as a uniform-field prism with the core's cross-section
// (no fringing). All quantities are SI: metres, tesla, ampere-turns, hertz.

#include <span>
#include <vector>

namespace nvc::magcore {

struct CoreGeometry {
    double outer_diameter = 0.10; ///< m
    double inner_diameter = 0.06; ///< m
    double thickness = 0.02;      ///< m
    double gap_length = 0.02;     ///< m

    /// ((outer - inner) / 2) * thickness [m^2]
    [[nodiscard]] double cross_section() const noexcept;
    /// Mean circumference minus the gap [m].
    [[nodiscard]] double magnetic_path_length() const noexcept;
    [[nodiscard]] double mean_circumference() const noexcept;

    /// Throws ValidationError naming the violated invariant.
    void validate() const;

    bool operator==(const CoreGeometry&) const = default;
};

struct CoreMaterial {
    double relative_permeability = 3.0e4;
    double eddy_corner_frequency = 89.33; ///< Hz
    double hysteresis_attenuation = 0.0;  ///< in [0, 1)

    void validate() const;

    bool operator==(const CoreMaterial&) const = default;
};

struct WindingConfig {
    int primary_turns = 10;
    int secondary_turns = 10;
    int auxiliary_turns = 10;

    void validate() const;
    [[nodiscard]] bool one_to_one() const noexcept { return primary_turns == secondary_turns; }

    bool operator==(const WindingConfig&) const = default;
};

/// Gap and core reluctances [A-turns/Wb].
struct Reluctance {
    double gap = 0.0;
    double core = 0.0;
    [[nodiscard]] double total() const noexcept { return gap + core; }
};

Reluctance reluctances(const CoreGeometry& geom, const CoreMaterial& mat);

/// g/(mu0 A) + l_m/(mu0 mu_r A).
double total_reluctance(const CoreGeometry& geom, const CoreMaterial& mat);

/// B = mu0 NI / (g + l_m / mu_r). Linear and odd in `ampere_turns`.
double gap_flux_density(const CoreGeometry& geom, const CoreMaterial& mat, double ampere_turns);

struct GapPoint {
    double gap_length;   ///< m
    double flux_density; ///< T
};

/// gap_flux_density evaluated per gap value, with l_m recomputed for each.
std::vector<GapPoint> gap_sweep(const CoreGeometry& geom, const CoreMaterial& mat,
                                double ampere_turns, std::span<const double> gap_values);

/// Eddy-current low-pass times flat hysteresis loss: (1 - h) / sqrt(1 + (f/f_e)^2).
double transfer_attenuation(double frequency, const CoreMaterial& mat);

/// Phase lag of the eddy-current low-pass at `frequency` [rad], positive = lag.
double transfer_phase_lag(double frequency, const CoreMaterial& mat);

/// Eddy corner frequency giving attenuation(f)/attenuation(0) == `ratio` (0 < ratio < 1).
double eddy_corner_for_ratio(double frequency, double ratio);

/// Gap flux per ampere of current imbalance in a `turns`-turn winding [T/A].
/// Multiply by 1e3 for pT/nA.
double conversion_coefficient(const CoreGeometry& geom, const CoreMaterial& mat, int turns,
                              double frequency);

/// Affine frequency dependence of the comparator's ratio error.
struct RatioErrorModel {
    double hysteresis = 0.0;  ///< eps_h, dimensionless
    double eddy_per_hz = 0.0; ///< eps_e, 1/Hz

    bool operator==(const RatioErrorModel&) const = default;
};

/// eps_h + eps_e * f. A negative result is allowed; callers flag it.
double ratio_error_model(double frequency, const RatioErrorModel& model);

inline double ratio_error_model(double frequency, double eps_h, double eps_e) {
    return ratio_error_model(frequency, RatioErrorModel{eps_h, eps_e});
}

} // namespace nvc::magcore
