#pragma once

#include <complex>
#include <vector>

namespace optocorr::fft {

// Unnormalized forward DFT, X_k = sum_t x_t exp(-2 pi i k t / n).
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in);

// Normalized inverse, x_t = (1/n) sum_k X_k exp(+2 pi i k t / n).
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in);

}  // namespace optocorr::fft
