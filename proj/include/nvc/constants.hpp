#pragma once

#include <cmath>
#include <numbers>

namespace nvc::constants {

/// Vacuum permeability [H/m].
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;

/// NV ground-state zero-field splitting [Hz].
inline constexpr double nv_zero_field_splitting = 2.87e9;

/// NV electron gyromagnetic ratio g_e * mu_B / h [Hz/T].
inline constexpr double nv_gyromagnetic_ratio = 28.024e9;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Fractional part of a phase given in cycles; exact, and cheaper than fmod.
inline double cycle_fraction(double cycles) {
    return cycles - std::floor(cycles);
}

} // namespace nvc::constants
