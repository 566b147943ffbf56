#include "nvc/magcore.hpp"

#include "nvc/constants.hpp"
#include "nvc/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nvc::magcore {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ValidationError(what);
    }
}

} // namespace

double CoreGeometry::cross_section() const noexcept {
    return 0.5 * (outer_diameter - inner_diameter) * thickness;
}

double CoreGeometry::mean_circumference() const noexcept {
    return std::numbers::pi * 0.5 * (outer_diameter + inner_diameter);
}

double CoreGeometry::magnetic_path_length() const noexcept {
    return mean_circumference() - gap_length;
}

void CoreGeometry::validate() const {
    require(std::isfinite(outer_diameter) && std::isfinite(inner_diameter) &&
                std::isfinite(thickness) && std::isfinite(gap_length),
            "geometry: all dimensions must be finite");
    require(inner_diameter > 0.0, "geometry: inner_diameter > 0 violated");
    require(outer_diameter > inner_diameter, "geometry: outer_diameter > inner_diameter violated");
    require(thickness > 0.0, "geometry: thickness > 0 violated");
    require(gap_length > 0.0 && gap_length < mean_circumference(),
            "geometry: 0 < gap_length < mean circumference violated (gap_length = " +
                std::to_string(gap_length) + " m)");
    require(cross_section() > 0.0, "geometry: cross-section A > 0 violated");
    require(magnetic_path_length() > 0.0, "geometry: magnetic path l_m > 0 violated");
}

void CoreMaterial::validate() const {
    require(relative_permeability >= 1.0, "material: relative_permeability >= 1 violated");
    require(eddy_corner_frequency > 0.0 && std::isfinite(eddy_corner_frequency),
            "material: eddy_corner_frequency > 0 violated");
    require(hysteresis_attenuation >= 0.0 && hysteresis_attenuation < 1.0,
            "material: 0 <= hysteresis_attenuation < 1 violated");
}

void WindingConfig::validate() const {
    require(primary_turns >= 0 && secondary_turns >= 0 && auxiliary_turns >= 0,
            "windings: turn counts must be >= 0");
}

Reluctance reluctances(const CoreGeometry& geom, const CoreMaterial& mat) {
    geom.validate();
    mat.validate();
    const double mu_a = constants::mu0 * geom.cross_section();
    return {geom.gap_length / mu_a,
            geom.magnetic_path_length() / (mu_a * mat.relative_permeability)};
}

double total_reluctance(const CoreGeometry& geom, const CoreMaterial& mat) {
    return reluctances(geom, mat).total();
}

double gap_flux_density(const CoreGeometry& geom, const CoreMaterial& mat, double ampere_turns) {
    geom.validate();
    mat.validate();
    const double effective_gap =
        geom.gap_length + geom.magnetic_path_length() / mat.relative_permeability;
    return constants::mu0 * ampere_turns / effective_gap;
}

std::vector<GapPoint> gap_sweep(const CoreGeometry& geom, const CoreMaterial& mat,
                                double ampere_turns, std::span<const double> gap_values) {
    if (gap_values.empty()) {
        throw ValidationError("gap_sweep: empty gap list");
    }
    std::vector<GapPoint> curve;
    curve.reserve(gap_values.size());
    CoreGeometry g = geom;
    for (double gap : gap_values) {
        g.gap_length = gap;
        curve.push_back({gap, gap_flux_density(g, mat, ampere_turns)});
    }
    return curve;
}

double transfer_attenuation(double frequency, const CoreMaterial& mat) {
    mat.validate();
    if (frequency < 0.0) {
        throw ValidationError("transfer_attenuation: frequency must be >= 0");
    }
    const double x = frequency / mat.eddy_corner_frequency;
    return (1.0 - mat.hysteresis_attenuation) / std::sqrt(1.0 + x * x);
}

double transfer_phase_lag(double frequency, const CoreMaterial& mat) {
    return std::atan(frequency / mat.eddy_corner_frequency);
}

double eddy_corner_for_ratio(double frequency, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0) || !(frequency > 0.0)) {
        throw ValidationError("eddy_corner_for_ratio: need f > 0 and 0 < ratio < 1");
    }
    return frequency / std::sqrt(1.0 / (ratio * ratio) - 1.0);
}

double conversion_coefficient(const CoreGeometry& geom, const CoreMaterial& mat, int turns,
                              double frequency) {
    if (turns < 1) {
        throw ValidationError("conversion_coefficient: turns >= 1 required");
    }
    return gap_flux_density(geom, mat, static_cast<double>(turns)) *
           transfer_attenuation(frequency, mat);
}

double ratio_error_model(double frequency, const RatioErrorModel& model) {
    if (frequency < 0.0) {
        throw ValidationError("ratio_error_model: frequency must be >= 0");
    }
    return model.hysteresis + model.eddy_per_hz * frequency;
}

} // namespace nvc::magcore
