#include "sfi/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "sfi/errors.hpp"
#include "sfi/tail.hpp"

namespace sfi {

namespace {

using cd = std::complex<double>;

// Pointwise source density and two derivatives at arbitrary locations,
// backed by closed forms when available and by a fine inverted grid plus the
// power-tail model otherwise.
struct SourceEval {
  const SourceModel* s;
  std::optional<StableDensity> sd;     // ExactStable
  std::optional<DensityGrid> rep;      // CustomGrid
  std::vector<double> rep_d2;          // finite-difference second derivative

  explicit SourceEval(const SourceModel& src) : s(&src) {
    if (src.kind == SourceModel::Kind::ExactStable) {
      sd = stable_density(src.law, make_centered_grid(256.0, std::size_t{1} << 16), 8);
    } else if (src.kind == SourceModel::Kind::CustomGrid) {
      rep = *src.custom;
      rep_d2 = finite_diff_derivative(rep->grid, rep->derivative);
    }
  }

  static double interp(const Grid& g, const std::vector<double>& v, double x) {
    const double pos = (x - g.x_lo) / g.dx;
    if (pos < 0.0 || pos > static_cast<double>(g.count - 1)) return 0.0;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), g.count - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
  }

  bool inside(const Grid& g, double x) const { return x >= g.x_lo && x <= g.node(g.count - 1); }

  double at(double y) const {
    if (s->has_closed_form()) return s->density_at(y);
    const DensityGrid& d = sd ? sd->density : *rep;
    if (inside(d.grid, y)) return interp(d.grid, d.values, y);
    return d.tail.density_at(y);
  }
  double d1(double y) const {
    if (s->has_closed_form()) return s->density_deriv_at(y);
    const DensityGrid& d = sd ? sd->density : *rep;
    if (inside(d.grid, y)) return interp(d.grid, d.derivative, y);
    // derivative of the power-tail model: -(1+alpha) p / y
    const double p = d.tail.density_at(y);
    return y == 0.0 ? 0.0 : -(1.0 + d.tail.alpha) * p / y;
  }
  double d2(double y) const {
    if (s->has_closed_form()) return s->density_second_at(y);
    const DensityGrid& d = sd ? sd->density : *rep;
    if (inside(d.grid, y)) {
      if (sd) {
        // finite difference of the spectral derivative
        const double h = d.grid.dx;
        return (d1(y + h) - d1(y - h)) / (2.0 * h);
      }
      return interp(d.grid, rep_d2, y);
    }
    const double p = d.tail.density_at(y);
    const double b = 1.0 + d.tail.alpha;
    return b * (b + 1.0) * p / (y * y);
  }
};

cd model_ft_side(const JumpModel& m, double t, bool right) {
  if (m.h == 0.0) return {0.0, 0.0};
  const cd z = right ? cd(m.lambda, -t) : cd(m.lambda, t);
  const cd inv = 1.0 / z;
  const cd poly = inv * (1.0 + inv * (m.a + inv * (2.0 * m.b)));
  const double ph = right ? t : -t;
  return cd(std::cos(ph), std::sin(ph)) * m.h * poly;
}

cd model_ft(const Truncation& tr, double t) {
  return model_ft_side(tr.jump_right, t, true) + model_ft_side(tr.jump_left, t, false);
}

// z^k by binary powering.
cd powi(cd z, int k) {
  cd acc{1.0, 0.0};
  while (k > 0) {
    if (k & 1) acc *= z;
    z *= z;
    k >>= 1;
  }
  return acc;
}

}  // namespace

std::complex<double> Truncation::f_tilde_at(double t) const {
  cd acc{0.0, 0.0};
  for (std::size_t i = 0; i < gl_x.size(); ++i)
    acc += gl_w[i] * cd(std::cos(t * gl_x[i]), std::sin(t * gl_x[i]));
  return acc;
}

std::complex<double> Truncation::g_tilde_at(double t) const {
  return density_charfn_at(q_remainder, t) + model_ft(*this, t);
}

cvec Truncation::f_tilde_uniform(const Grid& tgrid) const {
  cvec out(tgrid.count, cd{0.0, 0.0});
  for (std::size_t i = 0; i < gl_x.size(); ++i) {
    const double x = gl_x[i];
    // geometric phase recurrence along the uniform frequency grid
    cd cur = std::polar(1.0, tgrid.x_lo * x);
    const cd step = std::polar(1.0, tgrid.dx * x);
    const double w = gl_w[i];
    for (std::size_t k = 0; k < tgrid.count; ++k) {
      out[k] += w * cur;
      cur *= step;
    }
  }
  return out;
}

cvec Truncation::g_tilde_uniform(const Grid& tgrid) const {
  cvec out = density_to_charfn(q_remainder, tgrid).values;
  for (std::size_t k = 0; k < tgrid.count; ++k) out[k] += model_ft(*this, tgrid.node(k));
  return out;
}

Truncation truncate(const SourceModel& s, int n, const NormalizingSeq& norm,
                    const Grid& xgrid) {
  if (n < 2) throw ValidationError("truncation needs n >= 2");
  xgrid.validate();
  const SourceEval ev(s);
  const double bn = norm.b(n);

  Truncation tr;
  tr.n = n;
  tr.b_n = bn;
  tr.delta_n = tail_integral([&](double y) { return ev.at(y); }, bn) +
               tail_integral([&](double y) { return ev.at(-y); }, bn);
  const double delta = tr.delta_n;
  if (!(delta > 0.0 && delta < 1.0))
    throw ValidationError("truncation level leaves no mass on one side");

  auto r = [&](double x) { return bn * ev.at(bn * x); };        // rescaled density
  auto r1 = [&](double x) { return bn * bn * ev.d1(bn * x); };  // and derivatives
  auto r2 = [&](double x) { return bn * bn * bn * ev.d2(bn * x); };

  // panel quadrature over the truncated support [-1,1]
  const int panels = 128;
  tr.gl_x.reserve(panels * 16);
  tr.gl_w.reserve(panels * 16);
  double mean = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = -1.0 + 2.0 * p / panels;
    const double b = -1.0 + 2.0 * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < 16; ++i) {
      const double x = mid + half * gauss16_x[i];
      const double w = half * gauss16_w[i] * r(x) / (1.0 - delta);
      tr.gl_x.push_back(x);
      tr.gl_w.push_back(w);
      mean += w * x;
    }
  }
  tr.d_n = mean;

  // grid samples of the conditional densities (half-values at the boundary)
  std::vector<double> pv(xgrid.count, 0.0), pd(xgrid.count, 0.0);
  std::vector<double> qv(xgrid.count, 0.0), qd(xgrid.count, 0.0);
  for (std::size_t i = 0; i < xgrid.count; ++i) {
    const double x = xgrid.node(i);
    const double gap = std::abs(std::abs(x) - 1.0);
    if (gap <= 1e-9) {
      pv[i] = 0.5 * r(x) / (1.0 - delta);
      pd[i] = 0.5 * r1(x) / (1.0 - delta);
      qv[i] = 0.5 * r(x) / delta;
      qd[i] = 0.5 * r1(x) / delta;
    } else if (std::abs(x) < 1.0) {
      pv[i] = r(x) / (1.0 - delta);
      pd[i] = r1(x) / (1.0 - delta);
    } else {
      qv[i] = r(x) / delta;
      qd[i] = r1(x) / delta;
    }
  }
  TailModel qtail;
  if (s.known_alpha < 2.0 && s.tail_constant() > 0.0) {
    qtail.alpha = s.known_alpha;
    qtail.c_left = qtail.c_right = s.tail_constant() * std::pow(bn, -s.known_alpha) / delta;
    qtail.active = true;
  }
  tr.p_tilde = make_density(xgrid, std::move(pv), TailModel{}, std::move(pd));
  tr.q_tilde = make_density(xgrid, qv, qtail, qd);

  // boundary models matched to value and two derivatives of q_tilde
  auto fit_jump = [](double h, double m1, double m2) {
    JumpModel m;
    m.h = h;
    m.a = m1 / h + m.lambda;
    m.b = (m2 - h * m.lambda * m.lambda + 2.0 * m.a * m.lambda * h) / (2.0 * h);
    return m;
  };
  tr.jump_right = fit_jump(r(1.0) / delta, r1(1.0) / delta, r2(1.0) / delta);
  tr.jump_left = fit_jump(r(-1.0) / delta, -r1(-1.0) / delta, r2(-1.0) / delta);

  std::vector<double> rem(xgrid.count, 0.0);
  for (std::size_t i = 0; i < xgrid.count; ++i) {
    const double x = xgrid.node(i);
    if (std::abs(x) < 1.0 - 1e-9) continue;
    const double full = r(x) / delta;
    const double model = x > 0.0 ? tr.jump_right.h * std::exp(-tr.jump_right.lambda * (x - 1.0)) *
                                       (1.0 + tr.jump_right.a * (x - 1.0) +
                                        tr.jump_right.b * (x - 1.0) * (x - 1.0))
                                 : tr.jump_left.h * std::exp(-tr.jump_left.lambda * (-x - 1.0)) *
                                       (1.0 + tr.jump_left.a * (-x - 1.0) +
                                        tr.jump_left.b * (-x - 1.0) * (-x - 1.0));
    rem[i] = full - model;
  }
  tr.q_remainder = make_density(xgrid, std::move(rem), qtail);

  // centered truncated charfn and its derivative on the conjugate grid
  const Grid tgrid = conjugate_grid(xgrid, xgrid.count);
  cvec f(tgrid.count, cd{0.0, 0.0}), fp(tgrid.count, cd{0.0, 0.0});
  for (std::size_t i = 0; i < tr.gl_x.size(); ++i) {
    const double x = tr.gl_x[i];
    cd cur = std::polar(1.0, tgrid.x_lo * x);
    const cd step = std::polar(1.0, tgrid.dx * x);
    const double w = tr.gl_w[i];
    for (std::size_t k = 0; k < tgrid.count; ++k) {
      f[k] += w * cur;
      fp[k] += w * cd(0.0, x) * cur;
      cur *= step;
    }
  }
  tr.psi_n.grid = tgrid;
  tr.psi_n.values.resize(tgrid.count);
  tr.psi_n_prime.resize(tgrid.count);
  for (std::size_t k = 0; k < tgrid.count; ++k) {
    const double t = tgrid.node(k);
    const cd rot = std::polar(1.0, -tr.d_n * t);
    tr.psi_n.values[k] = rot * f[k];
    tr.psi_n_prime[k] = rot * (fp[k] - cd(0.0, tr.d_n) * f[k]);
  }
  return tr;
}

double centered_charfn_slope_bound(const Truncation& tr) {
  double worst = 0.0;
  const Grid& g = tr.psi_n.grid;
  for (std::size_t k = 0; k < g.count; ++k) {
    const double t = g.node(k);
    if (t == 0.0) continue;
    worst = std::max(worst, static_cast<double>(tr.n) * std::abs(tr.psi_n_prime[k]) / std::abs(t));
  }
  return worst;
}

InequalityReport truncated_charfn_envelope(const Truncation& tr, double delta) {
  if (!(delta > 0.0)) throw ValidationError("envelope exponent must be positive");
  const Grid& g = tr.psi_n.grid;
  double chat = std::numeric_limits<double>::infinity();
  double worst_t = 1.0;
  bool any = false;
  for (std::size_t k = 0; k < g.count; ++k) {
    const double at = std::abs(g.node(k));
    if (at < 1.0 || at > tr.b_n) continue;
    const double mag = std::abs(tr.psi_n.values[k]);
    const double c = mag <= 0.0 ? std::numeric_limits<double>::infinity()
                                : (1.0 - std::log(mag)) / std::pow(at, delta);
    any = true;
    if (c < chat) {
      chat = c;
      worst_t = g.node(k);
    }
  }
  InequalityReport r;
  r.name = "truncated_charfn_envelope";
  r.lhs = 0.0;
  r.rhs = any ? chat : 0.0;
  r.satisfied = any && chat > 0.0 && std::isfinite(chat);
  r.margin = r.rhs - r.lhs;
  r.witness = worst_t;
  return r;
}

std::pair<double, double> charfn_power_integrability(const Truncation& tr, int k) {
  if (k < 1) throw ValidationError("power k must be >= 1");
  const Grid& g = tr.psi_n.grid;
  double i1 = 0.0, i2 = 0.0;
  for (std::size_t j = 0; j < g.count; ++j) {
    const double t = g.node(j);
    const double mag = std::abs(tr.psi_n.values[j]);
    const double dmag = std::abs(tr.psi_n_prime[j]);
    i1 += (1.0 + std::abs(t)) * std::pow(mag, k);
    i2 += t * t * static_cast<double>(k) * static_cast<double>(k) * dmag * dmag *
          std::pow(mag, 2 * k - 2);
  }
  return {i1 * g.dx, i2 * g.dx};
}

BinomialReconstruction binomial_reconstruction(const SourceModel& s, const Truncation& tr,
                                               std::size_t k_max_terms) {
  const int n = tr.n;
  const double delta = tr.delta_n;
  const Grid& xg = tr.q_remainder.grid;
  const Grid tgrid = conjugate_grid(xg, xg.count);

  BinomialReconstruction out;
  const double lgn = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    const double lw = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                      k * std::log1p(-delta) + (n - k) * std::log(delta);
    const double w = std::exp(lw);
    if (w >= 1e-12) {
      out.ks.push_back(k);
      out.weights.push_back(w);
    } else {
      out.dropped_weight += w;
    }
  }
  if (out.ks.size() > k_max_terms)
    throw ValidationError("binomial reconstruction would need too many terms");

  const cvec ft = tr.f_tilde_uniform(tgrid);
  const cvec gt = tr.g_tilde_uniform(tgrid);

  // reference: the directly powered charfn inverted on the same frequency grid,
  // so the shared windowing bias cancels in the comparison
  const double bn = tr.b_n;
  const Grid scaled{tgrid.x_lo / bn, tgrid.dx / bn, tgrid.count};
  const cvec f1 = source_charfn_uniform(s, scaled);
  CharFnGrid ref;
  ref.grid = tgrid;
  ref.values.resize(tgrid.count);
  for (std::size_t j = 0; j < tgrid.count; ++j) ref.values[j] = powi(f1[j], n);
  const DensityGrid ref_density = charfn_to_density(ref, xg);

  std::vector<double> recon(xg.count, 0.0);
  const std::size_t zero = tgrid.count / 2;
  for (std::size_t i = 0; i < out.ks.size(); ++i) {
    const int k = out.ks[i];
    CharFnGrid term;
    term.grid = tgrid;
    term.values.resize(tgrid.count);
    for (std::size_t j = 0; j < tgrid.count; ++j)
      term.values[j] = powi(ft[j], k) * powi(gt[j], n - k);
    out.term_mass.push_back(std::abs(term.values[zero]));
    DensityGrid td = charfn_to_density(term, xg);
    for (std::size_t j = 0; j < xg.count; ++j) recon[j] += out.weights[i] * td.values[j];
    out.terms.push_back(std::move(td));
  }

  double l1 = 0.0;
  for (std::size_t j = 0; j < xg.count; ++j) l1 += std::abs(recon[j] - ref_density.values[j]);
  out.reconstruction_error = l1 * xg.dx;
  return out;
}

InequalityReport fisher_boundedness_witness(const SourceModel& s, const std::vector<int>& ns) {
  if (ns.empty()) throw ValidationError("need at least one n");
  const auto [law, norm] = calibrate_limit(s);
  (void)law;
  const ExperimentConfig cfg;

  double imin = std::numeric_limits<double>::infinity(), imax = 0.0;
  for (int n : ns) {
    const double i = fisher(zn_density(s, n, norm, cfg.xgrid, cfg.pad));
    imin = std::min(imin, i);
    imax = std::max(imax, i);
  }
  const double ratio = imax / imin;

  const int nmax = *std::max_element(ns.begin(), ns.end());
  const Truncation tr = truncate(s, nmax, norm, cfg.xgrid);
  const BinomialReconstruction rec = binomial_reconstruction(s, tr);
  bool terms_ok = true;
  for (const DensityGrid& term : rec.terms)
    if (!std::isfinite(fisher(term))) terms_ok = false;
  const double small_k =
      std::pow(2.0, nmax) * std::pow(tr.delta_n, 0.5 * static_cast<double>(nmax));

  InequalityReport r;
  r.name = "fisher_boundedness";
  r.lhs = ratio;
  r.rhs = 4.0;
  r.satisfied = std::isfinite(ratio) && ratio < 4.0 && terms_ok && small_k < 1e-6;
  r.margin = r.rhs - r.lhs;
  r.witness = small_k;
  return r;
}

}  // namespace sfi
