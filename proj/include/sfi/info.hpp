#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfi/grid.hpp"
#include "sfi/stable.hpp"

namespace sfi {

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;                 // rhs - lhs
  std::optional<double> witness;       // node location of the worst margin, when meaningful
  bool vacuous = false;                // an input had infinite Fisher information
};

// satisfied <=> lhs <= rhs + tol_rel*|rhs| + tol_abs
InequalityReport make_report(std::string name, double lhs, double rhs,
                             std::optional<double> witness = std::nullopt);

// Fisher information \int p'^2/p over {p > floor} plus the power-tail
// correction with the asymptotic score -(1+alpha)/x.  Divergence under grid
// refinement is reported in-band as +infinity.
double fisher(const DensityGrid& d);

// I(X||Z) = \int (p'/p - psi'/psi)^2 p.  Densities must share the grid.
double relative_fisher(const DensityGrid& d, const StableDensity& sd);

// D(X||Z) = \int p log(p/psi).
double relative_entropy(const DensityGrid& d, const StableDensity& sd);

// Frequency-domain convolution on a doubled window (same spacing); the
// derivative is obtained spectrally and the tail models are combined.
DensityGrid convolve(const DensityGrid& a, const DensityGrid& b);

// Stam, monotonicity, and convexity (weight 1/2) reports.
std::vector<InequalityReport> information_inequalities(const DensityGrid& p,
                                                       const DensityGrid& q);

// Relative-Fisher vs Fisher two-sided bounds with c(Z) = 2*c2^2 taken from
// the fitted score envelope of the (non-normal) stable reference.
std::vector<InequalityReport> score_bound_inequalities(const DensityGrid& d,
                                                       const StableDensity& sd);

// ||p'||_1 <= sqrt(I);  sup_t |t f(t)| <= ||p||_TV;  max p <= sqrt(I).
std::vector<InequalityReport> tv_and_charfn_bounds(const DensityGrid& d);

// I(p1*p2*p3) <= (T1*T2 + T1*T3 + T2*T3)/2 with Ti the grid TV norms.
InequalityReport three_convolution_fisher(const DensityGrid& p1, const DensityGrid& p2,
                                          const DensityGrid& p3);

// TV upper bound (\int |t f|^2 \int |(t f)'|^2)^{1/4}; requires the decay of
// t^2(|f|^2+|f'|^2) at the grid edges.
double tv_bound_from_charfn(const CharFnGrid& f, const cvec& fprime);

// Convolution of two finite-Fisher densities with spectral first and second
// derivatives of the convolution.
struct ConvolutionPair {
  DensityGrid p1, p2;
  double I1 = 0.0, I2 = 0.0;
  DensityGrid conv;
  std::vector<double> conv_d1, conv_d2;
};

ConvolutionPair make_convolution_pair(const DensityGrid& p1, const DensityGrid& p2);

// Pointwise |p'| <= I^{3/4} sqrt(p) <= I, integral \int p''^2/p <= I^2, and
// the tail bound at threshold T for two-fold convolutions.
std::vector<InequalityReport> convolution_pair_checks(const ConvolutionPair& pair, double T);

}  // namespace sfi
