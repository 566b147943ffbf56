#pragma once

// Sampled sinusoids by complex rotation, re-anchored to the exact phase at the
// start of every block so rounding cannot accumulate over long records.

#include "nvc/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace nvc {

/// out[i] = sin(2 pi cycles_per_sample (first + i) + phase).
inline void fill_sine(std::span<double> out, double cycles_per_sample, long long first,
                      double phase) {
    constexpr std::size_t block = 256;
    const double step = constants::two_pi * constants::cycle_fraction(cycles_per_sample);
    const double wc = std::cos(step);
    const double ws = std::sin(step);
    for (std::size_t start = 0; start < out.size(); start += block) {
        const double cycles = constants::cycle_fraction(
            cycles_per_sample * static_cast<double>(first + static_cast<long long>(start)));
        const double theta = constants::two_pi * cycles + phase;
        double c = std::cos(theta);
        double s = std::sin(theta);
        const std::size_t end = std::min(out.size(), start + block);
        for (std::size_t i = start; i < end; ++i) {
            out[i] = s;
            const double next_c = c * wc - s * ws;
            s = s * wc + c * ws;
            c = next_c;
        }
    }
}

} // namespace nvc
