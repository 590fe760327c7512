#include "sfi/sums.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "sfi/errors.hpp"

namespace sfi {

namespace {

constexpr double kPi = 3.141592653589793;

double student_norm_const(double nu) {
  return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) / std::sqrt(nu * kPi);
}

// z^n by binary powering: deterministic and cheap for the small n used here.
std::complex<double> powi(std::complex<double> z, int n) {
  std::complex<double> acc{1.0, 0.0};
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

bool closed_charfn(const SourceModel& s) {
  using K = SourceModel::Kind;
  return s.kind == K::Gaussian || s.kind == K::Cauchy || s.kind == K::ExactStable;
}

std::complex<double> closed_charfn_at(const SourceModel& s, double t) {
  using K = SourceModel::Kind;
  switch (s.kind) {
    case K::Gaussian: return {std::exp(-0.5 * t * t), 0.0};
    case K::Cauchy: return {std::exp(-std::abs(t)), 0.0};
    default: return stable_charfn_at(s.law, t);
  }
}

// Fine representation used when no closed-form charfn exists.
DensityGrid numeric_representation(const SourceModel& s) {
  if (s.kind == SourceModel::Kind::CustomGrid) return *s.custom;
  const Grid g = make_centered_grid(256.0, std::size_t{1} << 16);
  std::vector<double> vals(g.count), deriv(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    vals[i] = s.density_at(g.node(i));
    deriv[i] = s.density_deriv_at(g.node(i));
  }
  TailModel tail;
  tail.alpha = s.known_alpha;
  tail.c_left = tail.c_right = s.tail_constant();
  tail.active = tail.c_right > 0.0;
  return make_density(g, std::move(vals), tail, std::move(deriv));
}

}  // namespace

std::string SourceModel::label() const {
  switch (kind) {
    case Kind::Gaussian: return "gaussian";
    case Kind::Cauchy: return "cauchy";
    case Kind::ExactStable: return "stable";
    case Kind::StudentT: return "student_t";
    default: return "custom";
  }
}

SourceModel SourceModel::gaussian() {
  SourceModel s;
  s.kind = Kind::Gaussian;
  s.known_alpha = 2.0;
  return s;
}

SourceModel SourceModel::cauchy() {
  SourceModel s;
  s.kind = Kind::Cauchy;
  s.known_alpha = 1.0;
  return s;
}

SourceModel SourceModel::exact_stable(const StableLaw& law) {
  law.validate();
  SourceModel s;
  s.kind = Kind::ExactStable;
  s.law = law;
  s.known_alpha = law.alpha;
  s.symmetric = law.beta == 0.0 && law.location_a == 0.0;
  return s;
}

SourceModel SourceModel::student_t(double nu) {
  if (!(nu > 0.0 && nu < 2.0))
    throw ValidationError("student_t tail exponent must be in (0,2)");
  SourceModel s;
  s.kind = Kind::StudentT;
  s.student_nu = nu;
  s.known_alpha = nu;
  return s;
}

SourceModel SourceModel::custom_grid(DensityGrid d, double tail_alpha, bool symmetric) {
  d.validate();
  SourceModel s;
  s.kind = Kind::CustomGrid;
  s.custom = std::move(d);
  s.known_alpha = tail_alpha;
  s.symmetric = symmetric;
  return s;
}

bool SourceModel::has_closed_form() const {
  return kind == Kind::Gaussian || kind == Kind::Cauchy || kind == Kind::StudentT;
}

double SourceModel::density_at(double x) const {
  switch (kind) {
    case Kind::Gaussian: return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    case Kind::Cauchy: return 1.0 / (kPi * (1.0 + x * x));
    case Kind::StudentT: {
      const double nu = student_nu;
      return student_norm_const(nu) * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0));
    }
    default: throw ValidationError("no closed-form density for this source");
  }
}

double SourceModel::density_deriv_at(double x) const {
  switch (kind) {
    case Kind::Gaussian: return -x * density_at(x);
    case Kind::Cauchy: return -2.0 * x / (kPi * (1.0 + x * x) * (1.0 + x * x));
    case Kind::StudentT: {
      const double nu = student_nu;
      return -student_norm_const(nu) * (nu + 1.0) * (x / nu) *
             std::pow(1.0 + x * x / nu, -0.5 * (nu + 3.0));
    }
    default: throw ValidationError("no closed-form density for this source");
  }
}

double SourceModel::density_second_at(double x) const {
  switch (kind) {
    case Kind::Gaussian: return (x * x - 1.0) * density_at(x);
    case Kind::Cauchy: {
      const double w = 1.0 + x * x;
      return (6.0 * x * x - 2.0) / (kPi * w * w * w);
    }
    case Kind::StudentT: {
      const double nu = student_nu;
      const double w = 1.0 + x * x / nu;
      return -student_norm_const(nu) * ((nu + 1.0) / nu) *
             std::pow(w, -0.5 * (nu + 5.0)) * (w - (nu + 3.0) * x * x / nu);
    }
    default: throw ValidationError("no closed-form density for this source");
  }
}

double SourceModel::tail_constant() const {
  switch (kind) {
    case Kind::Gaussian: return 0.0;
    case Kind::Cauchy: return 1.0 / kPi;
    case Kind::StudentT:
      return student_norm_const(student_nu) * std::pow(student_nu, 0.5 * (student_nu + 1.0));
    case Kind::ExactStable: {
      const double a = law.alpha;
      if (a == 2.0) return 0.0;
      // symmetric asymptotic constant: p ~ (c/pi) Gamma(a+1) sin(pi a/2) |x|^{-1-a}
      return law.scale_c * std::sin(kPi * a / 2.0) * std::exp(std::lgamma(a + 1.0)) / kPi;
    }
    default: return 0.0;
  }
}

double NormalizingSeq::b(int n) const {
  return std::pow(static_cast<double>(n) * h, 1.0 / alpha);
}

double NormalizingSeq::a(int n) const { return static_cast<double>(n) * mean / b(n); }

DensityGrid source_density(const SourceModel& s, const Grid& xgrid) {
  xgrid.validate();
  switch (s.kind) {
    case SourceModel::Kind::ExactStable:
      return stable_density(s.law, xgrid, 8).density;
    case SourceModel::Kind::CustomGrid:
      if (!(s.custom->grid == xgrid))
        throw GridMismatch("custom source carries its own grid");
      return *s.custom;
    default: {
      std::vector<double> vals(xgrid.count), deriv(xgrid.count);
      for (std::size_t i = 0; i < xgrid.count; ++i) {
        vals[i] = s.density_at(xgrid.node(i));
        deriv[i] = s.density_deriv_at(xgrid.node(i));
      }
      TailModel tail;
      tail.alpha = s.known_alpha;
      tail.c_left = tail.c_right = s.tail_constant();
      tail.active = tail.c_right > 0.0;
      return make_density(xgrid, std::move(vals), tail, std::move(deriv));
    }
  }
}

std::vector<std::complex<double>> source_charfn(const SourceModel& s,
                                                const std::vector<double>& ts) {
  std::vector<std::complex<double>> out(ts.size());
  if (closed_charfn(s)) {
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = closed_charfn_at(s, ts[i]);
    return out;
  }
  const DensityGrid rep = numeric_representation(s);
  for (std::size_t i = 0; i < ts.size(); ++i) out[i] = density_charfn_at(rep, ts[i]);
  return out;
}

cvec source_charfn_uniform(const SourceModel& s, const Grid& tgrid) {
  if (closed_charfn(s)) {
    cvec out(tgrid.count);
    for (std::size_t k = 0; k < tgrid.count; ++k) out[k] = closed_charfn_at(s, tgrid.node(k));
    return out;
  }
  const DensityGrid rep = numeric_representation(s);
  return density_to_charfn(rep, tgrid).values;
}

std::pair<StableLaw, NormalizingSeq> calibrate_limit(const SourceModel& s) {
  if (closed_charfn(s)) {
    StableLaw law;
    switch (s.kind) {
      case SourceModel::Kind::Gaussian: law = {2.0, 0.0, 0.5, 0.0}; break;
      case SourceModel::Kind::Cauchy: law = {1.0, 0.0, 1.0, 0.0}; break;
      default: law = s.law; break;
    }
    return {law, NormalizingSeq{law.alpha, 1.0, 0.0}};
  }

  // fit log(-log|f1|) = alpha*log t + log c over a small-t window
  const int m = 50;
  std::vector<double> ts(m);
  const double lo = std::log(1e-4), hi = std::log(1e-2);
  for (int i = 0; i < m; ++i)
    ts[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (m - 1));
  const auto f1 = source_charfn(s, ts);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    const double mag = std::abs(f1[i]);
    if (!(mag > 0.0 && mag < 1.0))
      throw FitFailed("charfn modulus outside (0,1) in the calibration window");
    xs[i] = std::log(ts[i]);
    ys[i] = std::log(-std::log(mag));
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double det = m * sxx - sx * sx;
  const double slope = (m * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  double rss = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = ys[i] - slope * xs[i] - intercept;
    rss += r * r;
  }
  const double rms = std::sqrt(rss / m);
  if (rms > 0.05) throw FitFailed("tail-index fit residual rms " + std::to_string(rms));

  const double alpha = std::min(slope, 2.0);
  if (!(alpha > 0.0)) throw FitFailed("fitted tail index is not positive");
  StableLaw law{alpha, 0.0, std::exp(intercept), 0.0};
  return {law, NormalizingSeq{alpha, 1.0, 0.0}};
}

DensityGrid zn_density(const SourceModel& s, int n, const NormalizingSeq& norm,
                       const Grid& xgrid, int pad) {
  if (n < 1) throw ValidationError("n must be >= 1");
  xgrid.validate();
  const double bn = norm.b(n);
  const double an = norm.a(n);

  const Grid padded = padded_grid(xgrid, pad);
  const Grid tgrid = conjugate_grid(padded, padded.count);
  const Grid scaled{tgrid.x_lo / bn, tgrid.dx / bn, tgrid.count};
  const cvec f1 = source_charfn_uniform(s, scaled);

  CharFnGrid fn;
  fn.grid = tgrid;
  fn.values.resize(tgrid.count);
  for (std::size_t k = 0; k < tgrid.count; ++k) {
    std::complex<double> v = powi(f1[k], n);
    if (an != 0.0) {
      const double ph = -an * tgrid.node(k);
      v *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    fn.values[k] = v;
  }
  return invert_cropped(fn, xgrid, padded, norm.alpha);
}

std::pair<double, double> local_limit_metrics(const DensityGrid& p_n, const StableDensity& sd) {
  if (!(p_n.grid == sd.density.grid))
    throw GridMismatch("local limit metrics need a shared grid");
  double g0 = 0.0, g1 = 0.0;
  for (std::size_t i = 0; i < p_n.grid.count; ++i) {
    g0 = std::max(g0, std::abs(p_n.values[i] - sd.density.values[i]));
    g1 = std::max(g1, std::abs(p_n.derivative[i] - sd.density.derivative[i]));
  }
  return {g0, g1};
}

InequalityReport charfn_envelope_check(const SourceModel& s, const std::vector<int>& ns,
                                       const NormalizingSeq& norm, double delta, double t0) {
  if (ns.empty()) throw ValidationError("need at least one n");
  if (!(delta > 0.0)) throw ValidationError("envelope exponent must be positive");

  double chat = std::numeric_limits<double>::infinity();
  double worst_t = t0;
  bool any = false;
  const int samples = 256;
  for (int n : ns) {
    const double bn = norm.b(n);
    const double tmax = std::min(bn, 512.0);
    if (!(tmax > t0)) continue;
    std::vector<double> ts(samples);
    const double llo = std::log(t0), lhi = std::log(tmax);
    for (int i = 0; i < samples; ++i)
      ts[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (samples - 1)) / bn;
    const auto f1 = source_charfn(s, ts);
    for (int i = 0; i < samples; ++i) {
      const double t = ts[i] * bn;
      const double mag = std::abs(f1[i]);
      const double c = mag <= 0.0 ? std::numeric_limits<double>::infinity()
                                  : static_cast<double>(n) * (-std::log(mag)) / std::pow(t, delta);
      any = true;
      if (c < chat) {
        chat = c;
        worst_t = t;
      }
    }
  }
  InequalityReport r;
  r.name = "charfn_envelope";
  r.lhs = 0.0;
  r.rhs = any ? chat : 0.0;
  r.satisfied = any && chat > 0.0 && std::isfinite(chat);
  r.margin = r.rhs - r.lhs;
  r.witness = worst_t;
  return r;
}

ExperimentConfig::ExperimentConfig() : xgrid(make_centered_grid(64.0, std::size_t{1} << 14)) {}

std::vector<ConvergenceRow> convergence_experiment(const SourceModel& s,
                                                   const std::vector<int>& ns,
                                                   const ExperimentConfig& cfg) {
  if (ns.empty()) throw ValidationError("need at least one n");
  const auto [law, norm] = calibrate_limit(s);
  const StableDensity sd = stable_density(law, cfg.xgrid, cfg.pad);
  const double mom_exp = norm.alpha / 2.0;

  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (int n : ns) {
    ConvergenceRow row;
    row.n = n;
    try {
      const DensityGrid zn = zn_density(s, n, norm, cfg.xgrid, cfg.pad);
      row.fisher = fisher(zn);
      row.rel_fisher = relative_fisher(zn, sd);
      row.rel_entropy = relative_entropy(zn, sd);
      const auto gaps = local_limit_metrics(zn, sd);
      row.sup_density_gap = gaps.first;
      row.sup_deriv_gap = gaps.second;
      row.moment_delta =
          quadrature(zn, [&](double x, double) { return std::pow(std::abs(x), mom_exp); });
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sfi
