#ifndef PERIHOM_FFT_HPP
#define PERIHOM_FFT_HPP

#include <complex>

namespace perihom {

using cplx = std::complex<double>;

// In-place c2c transforms of a dim-dimensional array with n points per axis.
// Convention: a field f(x) = sum_k fhat(k) exp(2*pi*i k.x) on [0,1)^dim.
//   fft_analysis  : physical samples -> Fourier coefficients (includes 1/n^dim)
//   fft_synthesis : Fourier coefficients -> physical samples
// Plans are cached internally; calls are thread-safe.
void fft_analysis(int dim, int n, cplx* data);
void fft_synthesis(int dim, int n, cplx* data);

} // namespace perihom

#endif
