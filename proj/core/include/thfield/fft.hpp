#pragma once

#include <complex>
#include <vector>

namespace thfield::fft {

/// In-place 2-D complex DFT on a row-major nx*ny array, e^(-i) forward
/// convention. The inverse includes the 1/(nx*ny) normalization.
/// Plans use FFTW_ESTIMATE so results are run-to-run deterministic.
void forward2d(std::complex<double>* data, int nx, int ny);
void inverse2d(std::complex<double>* data, int nx, int ny);

/// Smallest 5-smooth number >= n (sizes FFTW handles at full speed).
int next_fast_size(int n);

/// DFT frequency of bin m on an n-point grid with spacing h: 2*pi*m~/(n*h)
/// with m~ = m for m <= n/2 and m - n above.
double dft_frequency(int m, int n, double h);

}
