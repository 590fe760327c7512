#include "sfi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sfi/errors.hpp"
#include "sfi/tail.hpp"

namespace sfi {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559L;
constexpr double kTwoPi = 6.283185307179586;

inline std::complex<double> unit_phase(long double phase) {
  const long double r = std::fmod(phase, kTwoPiL);
  return {static_cast<double>(std::cos(r)), static_cast<double>(std::sin(r))};
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

bool Grid::symmetric_about_zero(double tol) const {
  // even count with node(count/2) == 0 covers [-L, L)
  return count % 2 == 0 && std::abs(node(count / 2)) <= tol * (std::abs(dx) + 1.0);
}

void Grid::validate() const {
  if (!(dx > 0.0)) throw ValidationError("grid spacing must be positive");
  if (count < 16) throw ValidationError("grid needs at least 16 nodes");
  if (!is_pow2(count)) throw ValidationError("grid count must be a power of two");
  if (!std::isfinite(x_lo)) throw ValidationError("grid origin must be finite");
}

Grid make_centered_grid(double halfwidth, std::size_t count) {
  Grid g{-halfwidth, 2.0 * halfwidth / static_cast<double>(count), count};
  g.validate();
  return g;
}

Grid conjugate_grid(const Grid& xgrid, std::size_t count) {
  const double dt = kTwoPi / (xgrid.dx * static_cast<double>(count));
  Grid g{-0.5 * dt * static_cast<double>(count), dt, count};
  g.validate();
  return g;
}

double TailModel::density_at(double x) const {
  if (!active) return 0.0;
  const double c = x < 0.0 ? c_left : c_right;
  return c * std::pow(std::abs(x), -(1.0 + alpha));
}

double TailModel::mass_beyond(double X_left, double X_right) const {
  if (!active) return 0.0;
  return (c_left * std::pow(X_left, -alpha) + c_right * std::pow(X_right, -alpha)) / alpha;
}

double DensityGrid::window_mass() const {
  double m = 0.0;
  for (double v : values) m += v;
  return m * grid.dx;
}

double DensityGrid::total_mass() const {
  return window_mass() + tail.mass_beyond(-grid.cover_lo(), grid.cover_hi());
}

void DensityGrid::validate(double tol_mass) const {
  grid.validate();
  if (values.size() != grid.count || derivative.size() != grid.count)
    throw ValidationError("density arrays must match the grid size");
  for (double v : values)
    if (!(v >= 0.0)) throw NotADensity("negative density value");
  const double m = total_mass();
  if (std::abs(m - 1.0) > tol_mass) throw NotADensity("mass " + std::to_string(m));
}

void CharFnGrid::validate(double tol) const {
  grid.validate();
  if (!grid.symmetric_about_zero()) throw ValidationError("frequency grid must be symmetric about 0");
  if (values.size() != grid.count) throw ValidationError("charfn array must match the grid size");
  const std::size_t zero = grid.count / 2;
  if (std::abs(values[zero] - 1.0) > tol) throw ValidationError("charfn must be 1 at t=0");
  for (std::size_t k = 0; k < grid.count; ++k) {
    if (std::abs(values[k]) > 1.0 + tol) throw ValidationError("charfn modulus exceeds 1");
    // Hermitian: f(-t) = conj f(t); node(zero - j) = -node(zero + j)
    if (k > zero) {
      const std::size_t mirror = 2 * zero - k;
      if (std::abs(values[k] - std::conj(values[mirror])) > tol)
        throw ValidationError("charfn is not Hermitian");
    }
  }
}

std::vector<double> finite_diff_derivative(const Grid& g, const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) return d;
  const double inv12 = 1.0 / (12.0 * g.dx);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) * inv12;
  // one-sided 4th order at the edges
  auto fwd = [&](std::size_t i) {
    return (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) /
           (12.0 * g.dx);
  };
  auto bwd = [&](std::size_t i) {
    return (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) /
           (12.0 * g.dx);
  };
  d[0] = fwd(0);
  d[1] = fwd(1);
  d[n - 2] = bwd(n - 2);
  d[n - 1] = bwd(n - 1);
  return d;
}

DensityGrid make_density(const Grid& g, std::vector<double> values, TailModel tail,
                         std::vector<double> derivative) {
  DensityGrid d;
  d.grid = g;
  d.values = std::move(values);
  d.tail = tail;
  d.derivative = derivative.empty() ? finite_diff_derivative(g, d.values) : std::move(derivative);
  return d;
}

double quadrature(const DensityGrid& d, const std::function<double(double, double)>& integrand) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    const double p = d.values[i];
    if (p <= tol::density_floor) continue;
    const double g = integrand(d.grid.node(i), p);
    if (!std::isfinite(g))
      throw NonFiniteIntegrand("at x = " + std::to_string(d.grid.node(i)));
    acc += g * p;
  }
  acc *= d.grid.dx;
  if (d.tail.active) {
    const double Xl = -d.grid.cover_lo();
    const double Xr = d.grid.cover_hi();
    if (d.tail.c_right > 0.0)
      acc += tail_integral(
          [&](double x) { return integrand(x, d.tail.density_at(x)) * d.tail.density_at(x); }, Xr);
    if (d.tail.c_left > 0.0)
      acc += tail_integral(
          [&](double x) { return integrand(-x, d.tail.density_at(-x)) * d.tail.density_at(-x); },
          Xl);
  }
  return acc;
}

namespace {

// Analytic charfn contribution of the power tails at frequency t.
std::complex<double> tail_charfn(const TailModel& tail, double Xl, double Xr, double t) {
  if (!tail.active || (tail.c_left == 0.0 && tail.c_right == 0.0)) return {0.0, 0.0};
  const double a = tail.alpha;
  if (std::abs(t) < 1e-14)
    return {(tail.c_right * std::pow(Xr, -a) + tail.c_left * std::pow(Xl, -a)) / a, 0.0};
  const double at = std::abs(t);
  const double fac = std::pow(at, a);
  const std::complex<double> Er = osc_tail_integral(a, at * Xr) * fac;
  const std::complex<double> El = osc_tail_integral(a, at * Xl) * fac;
  if (t > 0.0) return tail.c_right * Er + tail.c_left * std::conj(El);
  return tail.c_right * std::conj(Er) + tail.c_left * El;
}

}  // namespace

CharFnGrid density_to_charfn(const DensityGrid& d, const Grid& tgrid) {
  d.grid.validate();
  tgrid.validate();
  if (!tgrid.symmetric_about_zero())
    throw GridMismatch("frequency grid must be symmetric about 0");
  const double nyquist = kTwoPi / (2.0 * d.grid.dx);
  const double tmax = std::max(std::abs(tgrid.node(0)), std::abs(tgrid.node(tgrid.count - 1)));
  if (tmax > nyquist * (1.0 + 1e-12))
    throw GridMismatch("frequency grid exceeds the Nyquist band pi/dx");

  // The frequency spacing dt periodizes the represented density with period
  // 2pi/dt.  A hard hand-off from samples to the analytic tail model at the
  // window edge rings under inversion, so when the frequency grid is
  // oversampled we keep sampling the tail model on the same node lattice and
  // push the analytic remainder out to where its onset is harmless.
  std::size_t ext = 0;
  if (d.tail.active) {
    const double half_period = kTwoPi / (2.0 * tgrid.dx);
    const double target = std::min(4.0 * std::max(-d.grid.cover_lo(), d.grid.cover_hi()),
                                   half_period);
    const double room = target - std::max(-d.grid.cover_lo(), d.grid.cover_hi());
    if (room > 0.0) ext = static_cast<std::size_t>(room / d.grid.dx);
  }

  // f(t_k) = dx * e^{i t_k x_lo} * sum_j (p_j e^{i j dx t_lo}) e^{i (dx dt) j k}
  const std::size_t n = d.grid.count + 2 * ext;
  const double x_lo_ext = d.grid.x_lo - static_cast<double>(ext) * d.grid.dx;
  cvec u(n);
  const long double jstep = static_cast<long double>(d.grid.dx) * static_cast<long double>(tgrid.x_lo);
  for (std::size_t j = 0; j < n; ++j) {
    const double pj = (j < ext || j >= ext + d.grid.count)
                          ? d.tail.density_at(x_lo_ext + static_cast<double>(j) * d.grid.dx)
                          : d.values[j - ext];
    u[j] = pj * unit_phase(jstep * static_cast<long double>(j));
  }
  const long double theta = static_cast<long double>(d.grid.dx) * static_cast<long double>(tgrid.dx);
  cvec s = chirp_transform(u, tgrid.count, theta);

  const double shift = static_cast<double>(ext) * d.grid.dx;
  const double Xl = -d.grid.cover_lo() + shift;
  const double Xr = d.grid.cover_hi() + shift;
  CharFnGrid out;
  out.grid = tgrid;
  out.values.resize(tgrid.count);
  for (std::size_t k = 0; k < tgrid.count; ++k) {
    const double t = tgrid.node(k);
    std::complex<double> v =
        d.grid.dx * unit_phase(static_cast<long double>(t) * static_cast<long double>(x_lo_ext)) *
        s[k];
    v += tail_charfn(d.tail, Xl, Xr, t);
    out.values[k] = v;
  }
  return out;
}

std::complex<double> density_charfn_at(const DensityGrid& d, double t) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < d.grid.count; ++j)
    acc += d.values[j] * unit_phase(static_cast<long double>(t) *
                                    static_cast<long double>(d.grid.node(j)));
  acc *= d.grid.dx;
  acc += tail_charfn(d.tail, -d.grid.cover_lo(), d.grid.cover_hi(), t);
  return acc;
}

namespace {

// Core inversion sum: (dt/2pi) sum_k f_k e^{-i t_k x_j} evaluated on xgrid,
// with an extra factor (-i t_k)^deriv_order for derivatives.
cvec invert_core(const CharFnGrid& f, const Grid& xgrid, int deriv_order) {
  const std::size_t m = f.grid.count;
  cvec g(m);
  const long double kstep =
      static_cast<long double>(f.grid.dx) * static_cast<long double>(xgrid.x_lo);
  for (std::size_t k = 0; k < m; ++k) {
    std::complex<double> v = f.values[k] * unit_phase(-kstep * static_cast<long double>(k));
    for (int r = 0; r < deriv_order; ++r) v *= std::complex<double>(0.0, -f.grid.node(k));
    g[k] = v;
  }
  const long double theta =
      -static_cast<long double>(f.grid.dx) * static_cast<long double>(xgrid.dx);
  cvec s = chirp_transform(g, xgrid.count, theta);
  const double scale = f.grid.dx / kTwoPi;
  cvec out(xgrid.count);
  for (std::size_t j = 0; j < xgrid.count; ++j) {
    out[j] = scale *
             unit_phase(-static_cast<long double>(f.grid.x_lo) *
                        static_cast<long double>(xgrid.node(j))) *
             s[j];
  }
  return out;
}

void check_edge_decay(const CharFnGrid& f, int t_power) {
  auto mag = [&](std::size_t k) {
    return std::abs(f.values[k]) * std::pow(std::abs(f.grid.node(k)), t_power);
  };
  // average over a small edge band to be robust against zeros of oscillatory charfns
  const std::size_t band = std::max<std::size_t>(4, f.grid.count / 256);
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    lo += mag(i);
    hi += mag(f.grid.count - 1 - i);
  }
  lo /= static_cast<double>(band);
  hi /= static_cast<double>(band);
  if (lo > tol::charfn_edge || hi > tol::charfn_edge)
    throw NotIntegrable("charfn (times t^" + std::to_string(t_power) +
                        ") does not decay at the grid edges");
}

}  // namespace

DensityGrid charfn_to_density(const CharFnGrid& f, const Grid& xgrid) {
  xgrid.validate();
  check_edge_decay(f, 0);
  cvec p = invert_core(f, xgrid, 0);
  std::vector<double> vals(xgrid.count);
  double worst = 0.0;
  for (std::size_t j = 0; j < xgrid.count; ++j) {
    double v = p[j].real();
    if (v < 0.0) {
      worst = std::min(worst, v);
      v = 0.0;
    }
    vals[j] = v;
  }
  if (worst < -tol::neg_clamp)
    throw NotADensity("inversion produced " + std::to_string(worst) +
                      " (insufficient frequency window or non-density input)");
  return make_density(xgrid, std::move(vals));
}

std::vector<double> charfn_to_density_derivative(const CharFnGrid& f, const Grid& xgrid) {
  xgrid.validate();
  check_edge_decay(f, 1);
  cvec dp = invert_core(f, xgrid, 1);
  std::vector<double> out(xgrid.count);
  for (std::size_t j = 0; j < xgrid.count; ++j) out[j] = dp[j].real();
  return out;
}

std::vector<double> charfn_to_second_derivative(const CharFnGrid& f, const Grid& xgrid) {
  xgrid.validate();
  check_edge_decay(f, 2);
  cvec dp = invert_core(f, xgrid, 2);
  std::vector<double> out(xgrid.count);
  for (std::size_t j = 0; j < xgrid.count; ++j) out[j] = dp[j].real();
  return out;
}

Grid padded_grid(const Grid& xgrid, int pad) {
  if (pad < 1) throw ValidationError("pad factor must be >= 1");
  const std::size_t pcount = xgrid.count * static_cast<std::size_t>(pad);
  const double center = xgrid.node(xgrid.count / 2);
  Grid g{center - 0.5 * static_cast<double>(pcount) * xgrid.dx, xgrid.dx, pcount};
  g.validate();
  return g;
}

namespace {

// Fixed-exponent tail-constant fit: geometric mean of p * |x|^{1+alpha}.
double fit_tail_constant(const std::vector<double>& xs, const std::vector<double>& ps,
                         double alpha) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ps[i] <= 0.0) continue;
    acc += std::log(ps[i]) + (1.0 + alpha) * std::log(std::abs(xs[i]));
    ++n;
  }
  return n == 0 ? 0.0 : std::exp(acc / static_cast<double>(n));
}

}  // namespace

DensityGrid invert_cropped(const CharFnGrid& f, const Grid& xgrid, const Grid& padded,
                           double tail_alpha) {
  DensityGrid wide = charfn_to_density(f, padded);
  const std::vector<double> wide_deriv = charfn_to_density_derivative(f, padded);

  const std::size_t offset = (padded.count - xgrid.count) / 2;
  std::vector<double> vals(wide.values.begin() + offset,
                           wide.values.begin() + offset + xgrid.count);
  std::vector<double> deriv(wide_deriv.begin() + offset,
                            wide_deriv.begin() + offset + xgrid.count);

  TailModel tail;
  if (tail_alpha < 2.0) {
    std::vector<double> xr, pr, xl, pl;
    for (std::size_t i = 0; i < padded.count; ++i) {
      const double x = padded.node(i);
      if (std::abs(x) <= xgrid.cover_hi() || std::abs(x) > 2.0 * xgrid.cover_hi()) continue;
      (x > 0.0 ? xr : xl).push_back(x);
      (x > 0.0 ? pr : pl).push_back(wide.values[i]);
    }
    tail.alpha = tail_alpha;
    tail.c_right = fit_tail_constant(xr, pr, tail_alpha);
    tail.c_left = fit_tail_constant(xl, pl, tail_alpha);
    tail.active = tail.c_left > 0.0 || tail.c_right > 0.0;
    if (tail.active) {
      double window = 0.0;
      for (double v : vals) window += v;
      window *= xgrid.dx;
      const double deficit = wide.total_mass() - window;
      const double model = tail.mass_beyond(-xgrid.cover_lo(), xgrid.cover_hi());
      if (deficit > 0.0 && model > 0.0) {
        const double s = deficit / model;
        tail.c_left *= s;
        tail.c_right *= s;
      } else {
        tail = TailModel{};
      }
    }
  }
  return make_density(xgrid, std::move(vals), tail, std::move(deriv));
}

double tv_norm(const DensityGrid& d) {
  double tv = std::abs(d.values.front()) + std::abs(d.values.back());
  for (std::size_t i = 0; i + 1 < d.values.size(); ++i)
    tv += std::abs(d.values[i + 1] - d.values[i]);
  return tv;
}

}  // namespace sfi
