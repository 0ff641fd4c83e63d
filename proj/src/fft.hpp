#pragma once

// Thin FFTW wrapper. Plans are built once per size under a lock and then
// executed through the new-array interface, which FFTW guarantees to be
// thread-safe, so every function here is reentrant.

#include <complex>
#include <span>
#include <vector>

namespace ajscc::fft {

/// |X[k]|^2 for k = 0 .. n/2 of the real input (unnormalized DFT).
std::vector<double> power_spectrum(std::span<const double> samples);

/// Unnormalized forward / backward complex DFT.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);
std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in);

}  // namespace ajscc::fft
