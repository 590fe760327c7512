#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sfi {

using cvec = std::vector<std::complex<double>>;

// In-place radix-2 FFT; size must be a power of two.
// Forward convention: out[k] = sum_j in[j] * exp(-2*pi*i*j*k/n).
// The inverse includes the 1/n factor.
void fft_pow2(cvec& a, bool inverse);

// Chirp-Z (Bluestein) evaluation of out[k] = sum_j x[j] * exp(i*theta*j*k)
// for k = 0..m-1.  Works for arbitrary sizes and arbitrary real theta;
// quadratic phases are reduced mod 2*pi in long double to keep the
// round-off of j^2*theta/2 below ~1e-12 rad for j up to 2^20.
cvec chirp_transform(const cvec& x, std::size_t m, long double theta);

}  // namespace sfi
