#pragma once

#include <complex>
#include <functional>

namespace sfi {

// Oscillatory power-tail integral E(alpha, s) = \int_s^infty e^{iu} u^{-1-alpha} du,
// alpha in (0,2], s > 0.  Used to attach the analytic contribution of a
// power tail c*|x|^{-(1+alpha)} to a characteristic-function value.
// Accuracy ~1e-13 absolute over the ranges used by the transforms.
std::complex<double> osc_tail_integral(double alpha, double s);

// \int_X^infty F(x) dx for an integrand that decays at least like a power.
// Octave panels with 16-point Gauss-Legendre; deterministic.
// Throws TailUnbounded when the panel contributions fail to decay.
double tail_integral(const std::function<double(double)>& F, double X);

// 16-point Gauss-Legendre nodes and weights on [-1,1], shared by other
// panel quadratures in the library.
extern const double gauss16_x[16];
extern const double gauss16_w[16];

}  // namespace sfi
