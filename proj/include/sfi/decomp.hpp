#pragma once

#include <complex>
#include <vector>

#include "sfi/sums.hpp"

namespace sfi {

// One-sided boundary model h*e^{-lambda*s}(1 + a*s + b*s^2), s = distance past
// the truncation point |x| = 1.  Matches value and two derivatives of the
// complement density at the jump, so the grid remainder vanishes there and
// its Fourier transform is accurate at large frequencies.
struct JumpModel {
  double lambda = 8.0;
  double h = 0.0, a = 0.0, b = 0.0;
};

// Truncation of the source at the normalizing level b_n, rescaled by b_n:
// p_tilde is the conditional law on [-1,1], q_tilde the complement law.
struct Truncation {
  int n = 0;
  double b_n = 0.0;
  double delta_n = 0.0;  // P(|X| > b_n)
  double d_n = 0.0;      // mean of p_tilde
  DensityGrid p_tilde;   // grid samples; half-values at the boundary nodes
  DensityGrid q_tilde;
  CharFnGrid psi_n;            // centered truncated charfn e^{-i t d_n} f_tilde(t)
  cvec psi_n_prime;            // its t-derivative, same nodes

  // accurate evaluators (panel quadrature for f_tilde; boundary model plus a
  // smooth grid remainder for g_tilde)
  std::vector<double> gl_x, gl_w;  // quadrature nodes in [-1,1], p_tilde-weighted
  DensityGrid q_remainder;         // q_tilde minus the boundary models (with q's tail)
  JumpModel jump_right, jump_left;

  std::complex<double> f_tilde_at(double t) const;   // charfn of p_tilde
  std::complex<double> g_tilde_at(double t) const;   // charfn of q_tilde
  cvec f_tilde_uniform(const Grid& tgrid) const;
  cvec g_tilde_uniform(const Grid& tgrid) const;
};

// Builds the truncation on the grid z_n lives on (boundary +-1 should fall on
// nodes for the stated accuracy).
Truncation truncate(const SourceModel& s, int n, const NormalizingSeq& norm,
                    const Grid& xgrid);

// n * sup_{t != 0} |psi_n'(t)| / |t| over the stored frequency nodes.
double centered_charfn_slope_bound(const Truncation& tr);

// Largest c with |f_tilde(t)| <= e * exp(-c |t|^delta) on 1 <= |t| <= b_n;
// satisfied iff c > 0.
InequalityReport truncated_charfn_envelope(const Truncation& tr, double delta);

// (int (1+|t|) |f_tilde|^k dt, int t^2 k^2 |f_tilde'|^2 |f_tilde|^{2k-2} dt)
// over the stored frequency window; both must be finite for the local limit
// argument to go through at power k.
std::pair<double, double> charfn_power_integrability(const Truncation& tr, int k);

struct BinomialReconstruction {
  std::vector<int> ks;                 // retained term indices (weight >= cutoff)
  std::vector<double> weights;         // binomial weights of the retained terms
  std::vector<double> term_mass;       // charfn product at t = 0 per term
  std::vector<DensityGrid> terms;      // per-term densities on the z_n grid
  double dropped_weight = 0.0;
  double reconstruction_error = 0.0;   // L1 gap vs the directly inverted z_n density
};

// Z_n density as the binomial mixture over k of p_tilde^{*k} * q_tilde^{*(n-k)}
// (rescaled); all terms and the reference are inverted on the same frequency
// grid so the windowing bias cancels in the comparison.
BinomialReconstruction binomial_reconstruction(const SourceModel& s, const Truncation& tr,
                                               std::size_t k_max_terms = 24);

// I(Z_n) bounded along ns (max/min < 4) together with the split at the largest
// n: every retained mixture term has finite Fisher information and the dropped
// small-k weight 2^n delta_n^{n/2} is below 1e-6.
InequalityReport fisher_boundedness_witness(const SourceModel& s, const std::vector<int>& ns);

}  // namespace sfi
