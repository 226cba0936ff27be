#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mixedframe::spectral {

using Complex = std::complex<double>;

/// Angular wavenumbers of a length-n periodic grid with the given spacing,
/// in FFT order: 0, 1, ..., then negative frequencies (numpy.fft.fftfreq * 2pi).
std::vector<double> wavenumbers(std::size_t n, double spacing);

/// Unnormalized forward DFT: X_k = sum_j x_j e^{-2 pi i jk/n}.
std::vector<Complex> forward(std::span<const Complex> samples);

/// Inverse DFT including the 1/n factor.
std::vector<Complex> inverse(std::span<const Complex> modes);

/// Multiplies the DFT of `samples` by `multiplier[k]` and transforms back.
std::vector<Complex> apply_multiplier(std::span<const Complex> samples,
                                      std::span<const Complex> multiplier);

}  // namespace mixedframe::spectral
