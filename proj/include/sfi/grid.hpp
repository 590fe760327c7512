#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "sfi/fft.hpp"

namespace sfi {

// Uniform node-centered grid: node(i) = x_lo + i*dx.  A node carries the
// cell [node - dx/2, node + dx/2], so the grid covers
// [x_lo - dx/2, x_lo + count*dx - dx/2] and midpoint sums approximate
// integrals over that window.
struct Grid {
  double x_lo = 0.0;
  double dx = 0.0;
  std::size_t count = 0;

  double node(std::size_t i) const { return x_lo + static_cast<double>(i) * dx; }
  double cover_lo() const { return x_lo - 0.5 * dx; }
  double cover_hi() const { return x_lo + static_cast<double>(count) * dx - 0.5 * dx; }

  bool symmetric_about_zero(double tol = 1e-9) const;
  void validate() const;  // throws ValidationError
  bool operator==(const Grid& o) const {
    return x_lo == o.x_lo && dx == o.dx && count == o.count;
  }
};

// Centered grid covering [-halfwidth, halfwidth) with a node at 0.
Grid make_centered_grid(double halfwidth, std::size_t count);

// Frequency grid conformal with an x grid: dt*dx*count = 2*pi, t in [-pi/dx, pi/dx).
Grid conjugate_grid(const Grid& xgrid, std::size_t count);

// Power-tail density model outside the grid window:
// c_left*|x|^{-(1+alpha)} below, c_right*x^{-(1+alpha)} above.
struct TailModel {
  double alpha = 2.0;
  double c_left = 0.0;
  double c_right = 0.0;
  bool active = false;

  double density_at(double x) const;                  // model value (0 when inactive)
  double mass_beyond(double X_left, double X_right) const;
};

struct DensityGrid {
  Grid grid;
  std::vector<double> values;      // density, units 1/x
  TailModel tail;
  std::vector<double> derivative;  // same length as values

  double window_mass() const;              // midpoint sum over the window
  double total_mass() const;               // window + analytic tail
  void validate(double tol_mass = 1e-6) const;
};

struct CharFnGrid {
  Grid grid;  // frequency domain, symmetric about 0
  cvec values;

  void validate(double tol = 1e-6) const;  // f(0)=1, |f|<=1+tol, Hermitian
};

// 4th-order central finite differences, one-sided at the edges.
std::vector<double> finite_diff_derivative(const Grid& g, const std::vector<double>& v);

// Builds a DensityGrid; derivative defaults to finite differences of `values`.
DensityGrid make_density(const Grid& g, std::vector<double> values, TailModel tail = {},
                         std::vector<double> derivative = {});

// Composite quadrature of integrand(x, p(x)) against the density: midpoint sum
// over nodes with p > floor plus the analytic tail contribution evaluated on
// the tail model.  Deterministic.
double quadrature(const DensityGrid& d,
                  const std::function<double(double, double)>& integrand);

// f(t) = \int e^{itx} p(x) dx on a symmetric frequency grid (chirp transform
// plus analytic power-tail correction).  Throws GridMismatch when the target
// grid exceeds the Nyquist band pi/dx.
CharFnGrid density_to_charfn(const DensityGrid& d, const Grid& tgrid);

// Pointwise version for arbitrary (non-uniform) frequencies; O(count) per t.
std::complex<double> density_charfn_at(const DensityGrid& d, double t);

// p(x) = (1/2pi) \int e^{-itx} f(t) dt.  Small negative ringing (>-tol_neg)
// is clamped to zero; anything below -tol_neg throws NotADensity.
DensityGrid charfn_to_density(const CharFnGrid& f, const Grid& xgrid);

// p'(x) = (1/2pi) \int (-it) e^{-itx} f(t) dt.
std::vector<double> charfn_to_density_derivative(const CharFnGrid& f, const Grid& xgrid);

// p''(x) = (1/2pi) \int (-it)^2 e^{-itx} f(t) dt.
std::vector<double> charfn_to_second_derivative(const CharFnGrid& f, const Grid& xgrid);

// Grid total-variation norm: sum of |successive differences| plus the two
// boundary values (densities vanish at infinity).
double tv_norm(const DensityGrid& d);

// Window pad times wider than xgrid, same spacing, centered on xgrid's center.
Grid padded_grid(const Grid& xgrid, int pad);

// Inverts f (given on conjugate_grid(padded)) onto the padded window, crops to
// xgrid, and attaches the spectral derivative.  When tail_alpha < 2, power-tail
// constants are fitted from the padded band just outside the window and
// rescaled so window mass plus tail mass matches the padded total.
DensityGrid invert_cropped(const CharFnGrid& f, const Grid& xgrid, const Grid& padded,
                           double tail_alpha);

// Shared numeric conventions.
namespace tol {
inline constexpr double density_floor = 1e-300;  // guards divisions by p
// Fisher-type sums divide by p; below this fraction of the peak the inverted
// density is dominated by truncation ringing and the ratio is pure noise.
inline constexpr double fisher_floor_rel = 1e-9;
inline constexpr double neg_clamp = 1e-9;        // inversion ringing allowance
inline constexpr double mass = 1e-6;
inline constexpr double charfn_edge = 1e-3;      // |f| decay required at grid edges
inline constexpr double ineq_rel = 1e-7;         // inequality reports
inline constexpr double ineq_abs = 1e-10;
}  // namespace tol

}  // namespace sfi
