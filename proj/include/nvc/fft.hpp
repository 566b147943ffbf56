#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nvc::fft {

/// Unnormalized real-to-complex forward transform. Returns n/2 + 1 bins.
std::vector<std::complex<double>> forward_real(std::span<const double> input);

/// Inverse of forward_real for a length-`n` real signal. Unnormalized (result is n times the signal).
std::vector<double> inverse_real(std::span<const std::complex<double>> bins, std::size_t n);

/// Smallest length >= n whose prime factors are all in {2, 3, 5, 7}.
std::size_t good_size(std::size_t n);

} // namespace nvc::fft
