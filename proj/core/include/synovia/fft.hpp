#ifndef SYNOVIA_FFT_HPP
#define SYNOVIA_FFT_HPP

#include <complex>
#include <span>
#include <vector>

#include "synovia/grid.hpp"

namespace synovia {

using cplx = std::complex<double>;

/// Real-to-half-complex forward transform of one scalar component.
/// Output is scaled by 1/n^dim so coefficients are Fourier amplitudes:
/// f(x) = sum_k fhat(k) e^{2 pi i k.x}.
void fft_forward(const GridSpec& grid, std::span<const double> physical,
                 std::span<std::complex<double>> spectral);

/// Half-complex-to-real inverse of fft_forward (no extra scaling).
void fft_inverse(const GridSpec& grid, std::span<const std::complex<double>> spectral,
                 std::span<double> physical);

/// Iteration helper: decode a half-spectrum flat index into the signed
/// integer wavevector (k[2] = 0 in 2D). Returns the index unchanged.
void spectral_wavevector(const GridSpec& grid, std::size_t idx, int k[3]);

/// Multiplicity of a half-spectrum entry in Parseval sums: 2 if the
/// conjugate partner is not stored (0 < k_last < n/2 planes), else 1.
int spectral_weight(const GridSpec& grid, std::size_t idx);

}  // namespace synovia

#endif
