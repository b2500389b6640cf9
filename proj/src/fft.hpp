#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace actimetry::detail {

/// Unnormalized forward DFT of `x` zero-padded to `length`; returns the
/// length/2 + 1 non-negative-frequency coefficients.
std::vector<std::complex<double>> real_forward_fft(std::span<const double> x, std::size_t length);

/// Unnormalized inverse of a Hermitian half spectrum (length/2 + 1 bins).
std::vector<double> half_spectrum_inverse_fft(std::span<const std::complex<double>> half, std::size_t length);

}  // namespace actimetry::detail
