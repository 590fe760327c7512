#include "sfi/fft.hpp"

#include <cmath>

namespace sfi {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;

// exp(i * (theta * j * k)) with the phase reduced in long double first.
inline std::complex<double> unit_phase(long double phase) {
  const long double r = std::fmod(phase, kTwoPiL);
  return {static_cast<double>(std::cos(r)), static_cast<double>(std::sin(r))};
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void fft_pow2(cvec& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const long double ang = (inverse ? kTwoPiL : -kTwoPiL) / static_cast<long double>(len);
    const std::complex<double> wl = unit_phase(ang);
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

cvec chirp_transform(const cvec& x, std::size_t m, long double theta) {
  const std::size_t n = x.size();
  if (n == 0 || m == 0) return cvec(m, {0.0, 0.0});

  // theta*j*k = theta/2 * (j^2 + k^2 - (k-j)^2)
  const std::size_t span = std::max(n, m);
  std::vector<std::complex<double>> half(span);  // exp(i*theta/2 * idx^2)
  for (std::size_t j = 0; j < span; ++j) {
    const long double jj = static_cast<long double>(j);
    half[j] = unit_phase(theta * 0.5L * jj * jj);
  }

  const std::size_t conv = next_pow2(n + m - 1);
  cvec u(conv, {0.0, 0.0});
  cvec v(conv, {0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) u[j] = x[j] * half[j];
  // v[d] = exp(-i*theta/2*d^2) for d = -(n-1) .. (m-1), stored circularly
  for (std::size_t k = 0; k < m; ++k) v[k] = std::conj(half[k]);
  for (std::size_t j = 1; j < n; ++j) v[conv - j] = std::conj(half[j]);

  fft_pow2(u, false);
  fft_pow2(v, false);
  for (std::size_t i = 0; i < conv; ++i) u[i] *= v[i];
  fft_pow2(u, true);

  cvec out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = u[k] * half[k];
  return out;
}

}  // namespace sfi
