#pragma once

// FFTW-backed spectral helpers for periodic samples.  Plans are created once
// per length and reused; execution uses the new-array interface so concurrent
// calls are safe.

#include <complex>
#include <functional>
#include <span>

namespace mpv::detail {

/// Wavenumber 2*pi*k/L for mode index k in 0..N/2.
using Multiplier = std::function<std::complex<double>(int k, double wavenumber)>;

/// out = IFFT(mult(k) * FFT(in)).  `in` and `out` may alias.
void fourier_apply(std::span<const double> in, std::span<double> out, double L, const Multiplier& mult);

/// Spectral first derivative; the Nyquist mode is dropped.
void fourier_derivative(std::span<const double> in, std::span<double> out, double L);

}  // namespace mpv::detail
