#ifndef ATTACKPROC_FFT_HPP
#define ATTACKPROC_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace attackproc {

// Thin wrappers over FFTW. Plan creation is serialized internally, so these
// are safe to call from parallel kernels.

// Unnormalized forward DFT: X_k = sum_j x_j e^{-2 pi i j k / n}.
std::vector<std::complex<double>> fft_forward(std::span<const std::complex<double>> x);

// |X_k|^2 of the real-input DFT for k = 0..n/2 (inclusive).
std::vector<double> power_spectrum(std::span<const double> x);

}  // namespace attackproc

#endif
