#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfi/info.hpp"
#include "sfi/stable.hpp"

namespace sfi {

// An i.i.d. source family with known (or declared) tail exponent.
struct SourceModel {
  enum class Kind { Gaussian, Cauchy, ExactStable, StudentT, CustomGrid };
  Kind kind = Kind::Gaussian;
  StableLaw law;                     // ExactStable only
  double student_nu = 1.5;           // StudentT tail exponent, in (0,2)
  std::optional<DensityGrid> custom; // CustomGrid only
  double known_alpha = 2.0;
  bool symmetric = true;

  std::string label() const;

  static SourceModel gaussian();
  static SourceModel cauchy();
  static SourceModel exact_stable(const StableLaw& law);
  static SourceModel student_t(double nu);
  static SourceModel custom_grid(DensityGrid d, double tail_alpha, bool symmetric = true);

  bool has_closed_form() const;      // density and two derivatives in closed form
  double density_at(double x) const;       // closed-form kinds only
  double density_deriv_at(double x) const;
  double density_second_at(double x) const;
  double tail_constant() const;            // c in p ~ c |x|^{-(1+alpha)}
};

// b_n = (n*h)^{1/alpha} with a fitted constant h; a_n = n*mean/b_n.
struct NormalizingSeq {
  double alpha = 2.0;
  double h = 1.0;
  double mean = 0.0;

  double b(int n) const;
  double a(int n) const;
};

struct ConvergenceRow {
  int n = 0;
  double fisher = 0.0;
  double rel_fisher = 0.0;
  double rel_entropy = 0.0;
  double sup_density_gap = 0.0;
  double sup_deriv_gap = 0.0;
  double moment_delta = 0.0;  // E|Z_n|^{alpha/2}
  bool failed = false;
  std::string error;
};

DensityGrid source_density(const SourceModel& s, const Grid& xgrid);

// Characteristic function of the source at arbitrary frequencies
// (closed form when available, otherwise from a fine internal grid).
std::vector<std::complex<double>> source_charfn(const SourceModel& s,
                                                const std::vector<double>& ts);
cvec source_charfn_uniform(const SourceModel& s, const Grid& tgrid);

// Fits alpha and c from log(-log|f1(t)|) ~ alpha*log t + log c over a small-t
// window; returns the symmetric limit law and b_n = n^{1/alpha}.
std::pair<StableLaw, NormalizingSeq> calibrate_limit(const SourceModel& s);

// Density of Z_n = (X_1 + ... + X_n - a_n)/b_n via charfn powering on a
// pad-times wider window (anti-aliasing), cropped back to xgrid with the tail
// model rescaled to the mass deficit.  pad = 1 disables padding.
DensityGrid zn_density(const SourceModel& s, int n, const NormalizingSeq& norm,
                       const Grid& xgrid, int pad = 8);

// (sup |p_n - psi|, sup |p_n' - psi'|) over the shared grid.
std::pair<double, double> local_limit_metrics(const DensityGrid& p_n, const StableDensity& sd);

// Fits the largest c(delta) with |f_n(t)| <= exp(-c|t|^delta) on
// t0 <= |t| <= min(b_n, grid edge) across all tested n; satisfied iff c > 0.
InequalityReport charfn_envelope_check(const SourceModel& s, const std::vector<int>& ns,
                                       const NormalizingSeq& norm, double delta,
                                       double t0 = 1.0);

struct ExperimentConfig {
  Grid xgrid;
  int pad = 8;
  ExperimentConfig();  // defaults to window [-64,64], 2^14 nodes
};

std::vector<ConvergenceRow> convergence_experiment(const SourceModel& s,
                                                   const std::vector<int>& ns,
                                                   const ExperimentConfig& cfg);

}  // namespace sfi
