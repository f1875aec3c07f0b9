#ifndef SPLINELAB_FFT_HPP
#define SPLINELAB_FFT_HPP

#include <complex>
#include <vector>

namespace splinelab {

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace splinelab

#endif
