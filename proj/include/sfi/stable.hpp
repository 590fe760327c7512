#pragma once

#include <complex>

#include "sfi/grid.hpp"

namespace sfi {

// Stable law with characteristic function
//   f(t) = exp{ i*a*t - c*|t|^alpha * (1 + i*beta*sign(t)*omega(t, alpha)) },
//   omega = tan(pi*alpha/2) for alpha != 1, omega = (2/pi)*log|t| for alpha = 1.
struct StableLaw {
  double alpha = 2.0;
  double beta = 0.0;
  double scale_c = 0.5;
  double location_a = 0.0;

  // normal, or 0 < alpha < 2 with -1 < beta < 1: density positive on the line
  bool non_extremal() const;
  void validate() const;  // throws ValidationError on out-of-range parameters
};

std::complex<double> stable_charfn_at(const StableLaw& law, double t);
CharFnGrid stable_charfn(const StableLaw& law, const Grid& tgrid);

// Density, derivative and score of a non-extremal stable law obtained by
// Fourier inversion on an internally padded grid (anti-aliasing), with the
// power-tail model fitted from the mass deficit when alpha < 2.
struct StableDensity {
  StableLaw law;
  DensityGrid density;             // derivative array holds the Fourier derivative
  std::vector<double> score;       // p'/p, asymptotic -(1+alpha)/x where p underflows
  double score_c1 = 0.0;           // fitted lower score-envelope constant over |x| >= 5
  double score_c2 = 0.0;           // fitted upper constant: |score| <= c2/(1+|x|)
};

StableDensity stable_density(const StableLaw& law, const Grid& xgrid, int pad = 16);

// Score with linear interpolation inside the window and the asymptotic
// power-tail score outside.
double stable_score_at(const StableDensity& sd, double x);

}  // namespace sfi
