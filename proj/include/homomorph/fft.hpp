#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace homomorph::fft {

using cplx = std::complex<double>;

/// Forward real-to-half-complex transform of length n (input zero-padded or
/// truncated to n). Unnormalized, kernel exp(-j 2 pi k m / n). Returns n/2+1 bins.
std::vector<cplx> forward_real(std::span<const double> x, std::size_t n);

/// Inverse of forward_real: takes n/2+1 bins, returns n real samples, carries 1/n.
/// Imaginary parts of the DC and (even n) Nyquist bins are ignored.
std::vector<double> inverse_real(std::span<const cplx> half, std::size_t n);

}  // namespace homomorph::fft
