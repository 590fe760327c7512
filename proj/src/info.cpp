#include "sfi/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfi/errors.hpp"
#include "sfi/tail.hpp"

namespace sfi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double fisher_window_sum(const std::vector<double>& values, const std::vector<double>& deriv,
                         double dx, std::size_t stride, double floor) {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); i += stride) {
    const double p = values[i];
    if (p <= floor) continue;
    acc += deriv[i] * deriv[i] / p;
  }
  return acc * dx * static_cast<double>(stride);
}

double fisher_tail_correction(const DensityGrid& d) {
  if (!d.tail.active) return 0.0;
  const double a = d.tail.alpha;
  auto part = [&](double X, double c) {
    if (c <= 0.0) return 0.0;
    // integrand ((1+a)/x)^2 * c x^{-(1+a)}
    return tail_integral(
        [&](double x) { return (1.0 + a) * (1.0 + a) * c * std::pow(x, -(3.0 + a)); }, X);
  };
  return part(d.grid.cover_hi(), d.tail.c_right) + part(-d.grid.cover_lo(), d.tail.c_left);
}

// Normal laws underflow on wide grids; evaluate log psi analytically there.
double stable_log_density_at(const StableDensity& sd, std::size_t i) {
  const double psi = sd.density.values[i];
  if (psi > tol::density_floor) return std::log(psi);
  const double x = sd.density.grid.node(i);
  if (sd.law.alpha == 2.0) {
    const double v = 2.0 * sd.law.scale_c;  // variance of the alpha=2 law
    const double z = x - sd.law.location_a;
    return -z * z / (2.0 * v) - 0.5 * std::log(2.0 * 3.141592653589793 * v);
  }
  const double c = x < 0.0 ? sd.density.tail.c_left : sd.density.tail.c_right;
  return std::log(std::max(c, tol::density_floor)) -
         (1.0 + sd.law.alpha) * std::log(std::abs(x));
}

TailModel combine_tails(const TailModel& a, const TailModel& b) {
  if (!a.active) return b;
  if (!b.active) return a;
  if (a.alpha < b.alpha) return a;
  if (b.alpha < a.alpha) return b;
  TailModel t = a;
  t.c_left += b.c_left;
  t.c_right += b.c_right;
  return t;
}

}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs,
                             std::optional<double> witness) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.satisfied = lhs <= rhs + tol::ineq_rel * std::abs(rhs) + tol::ineq_abs;
  r.witness = witness;
  if (std::isinf(lhs) || std::isinf(rhs)) {
    r.vacuous = true;
    r.satisfied = true;
  }
  return r;
}

double fisher(const DensityGrid& d) {
  const double tail = fisher_tail_correction(d);
  // values below the relative floor carry only inversion/roundoff noise, and
  // dividing by them turns that noise into spurious information
  const double pmax = *std::max_element(d.values.begin(), d.values.end());
  const double floor = std::max(tol::density_floor, tol::fisher_floor_rel * pmax);
  const double fine = fisher_window_sum(d.values, d.derivative, d.grid.dx, 1, floor) + tail;
  const double coarse = fisher_window_sum(d.values, d.derivative, d.grid.dx, 2, floor) + tail;
  // divergence under refinement: the integral grows as nodes are added
  if (fine > 1.5 * coarse || fine - coarse > 0.05 * fine) return kInf;
  return fine;
}

double relative_fisher(const DensityGrid& d, const StableDensity& sd) {
  if (!(d.grid == sd.density.grid)) throw GridMismatch("relative_fisher needs a shared grid");
  const double pmax = *std::max_element(d.values.begin(), d.values.end());
  const double floor = std::max(tol::density_floor, tol::fisher_floor_rel * pmax);
  double acc = 0.0;
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    const double p = d.values[i];
    if (p <= floor) continue;
    const double diff = d.derivative[i] / p - sd.score[i];
    acc += diff * diff * p;
  }
  acc *= d.grid.dx;
  if (d.tail.active) {
    const double a = d.tail.alpha;
    auto part = [&](double sign, double X, double c) {
      if (c <= 0.0) return 0.0;
      return tail_integral(
          [&](double x) {
            const double diff = -(1.0 + a) / (sign * x) - stable_score_at(sd, sign * x);
            return diff * diff * c * std::pow(x, -(1.0 + a));
          },
          X);
    };
    acc += part(1.0, d.grid.cover_hi(), d.tail.c_right) +
           part(-1.0, -d.grid.cover_lo(), d.tail.c_left);
  }
  return acc;
}

double relative_entropy(const DensityGrid& d, const StableDensity& sd) {
  if (!(d.grid == sd.density.grid)) throw GridMismatch("relative_entropy needs a shared grid");
  const double pmax = *std::max_element(d.values.begin(), d.values.end());
  const double floor = std::max(tol::density_floor, tol::fisher_floor_rel * pmax);
  double acc = 0.0;
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    const double p = d.values[i];
    if (p <= floor) continue;
    acc += p * (std::log(p) - stable_log_density_at(sd, i));
  }
  acc *= d.grid.dx;
  if (d.tail.active) {
    const double a = d.tail.alpha;
    auto part = [&](double sign, double X, double c) {
      if (c <= 0.0) return 0.0;
      const TailModel& zt = sd.density.tail;
      if (sd.law.alpha != 2.0 && sd.law.alpha == a) {
        // matching power tails: p (log p - log psi) = log(c/cz) c x^{-(1+a)},
        // which integrates in closed form (and is pure roundoff when c = cz)
        const double cz = sign > 0.0 ? zt.c_right : zt.c_left;
        return std::log(c / std::max(cz, tol::density_floor)) * c * std::pow(X, -a) / a;
      }
      return tail_integral(
          [&](double x) {
            const double p = c * std::pow(x, -(1.0 + a));
            double logpsi;
            if (sd.law.alpha == 2.0) {
              const double v = 2.0 * sd.law.scale_c;
              logpsi = -x * x / (2.0 * v) - 0.5 * std::log(2.0 * 3.141592653589793 * v);
            } else {
              const double cz = sign > 0.0 ? zt.c_right : zt.c_left;
              logpsi = std::log(std::max(cz, tol::density_floor)) -
                       (1.0 + sd.law.alpha) * std::log(x);
            }
            return p * (std::log(p) - logpsi);
          },
          X);
    };
    acc += part(1.0, d.grid.cover_hi(), d.tail.c_right) +
           part(-1.0, -d.grid.cover_lo(), d.tail.c_left);
  }
  return acc;
}

DensityGrid convolve(const DensityGrid& a, const DensityGrid& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("convolve needs a shared grid");
  const std::size_t n2 = a.grid.count * 2;
  const double center = a.grid.node(a.grid.count / 2) + b.grid.node(b.grid.count / 2);
  Grid out{center - 0.5 * static_cast<double>(n2) * a.grid.dx, a.grid.dx, n2};
  // oversample the frequency grid: its spacing sets the periodization length
  // of the inversion, which matters once the inputs have power tails
  const Grid padded = padded_grid(out, 8);
  const Grid tgrid = conjugate_grid(padded, padded.count);
  CharFnGrid fa = density_to_charfn(a, tgrid);
  const CharFnGrid fb = density_to_charfn(b, tgrid);
  for (std::size_t k = 0; k < tgrid.count; ++k) fa.values[k] *= fb.values[k];
  const TailModel tail = combine_tails(a.tail, b.tail);
  DensityGrid conv = charfn_to_density(fa, out);
  if (tail.active) {
    // peel off the leading periodized tail images folded into the window
    const double period = 2.0 * kPi / tgrid.dx;
    for (std::size_t j = 0; j < out.count; ++j) {
      const double x = out.node(j);
      double alias = 0.0;
      for (int m : {-2, -1, 1, 2}) alias += tail.density_at(x + m * period);
      conv.values[j] = std::max(0.0, conv.values[j] - alias);
    }
  }
  conv.derivative = charfn_to_density_derivative(fa, out);
  conv.tail = tail;
  return conv;
}

std::vector<InequalityReport> information_inequalities(const DensityGrid& p,
                                                       const DensityGrid& q) {
  const double Ip = fisher(p);
  const double Iq = fisher(q);
  std::vector<InequalityReport> out;
  if (std::isinf(Ip) || std::isinf(Iq)) {
    out.push_back(make_report("stam", 0.0, kInf));
    out.push_back(make_report("monotonicity", 0.0, kInf));
    out.push_back(make_report("convexity_half", 0.0, kInf));
    return out;
  }
  const DensityGrid conv = convolve(p, q);
  const double Ipq = fisher(conv);
  out.push_back(make_report("stam", 1.0 / Ip + 1.0 / Iq, 1.0 / Ipq));
  out.push_back(make_report("monotonicity", Ipq, std::min(Ip, Iq)));

  std::vector<double> mixv(p.grid.count), mixd(p.grid.count);
  for (std::size_t i = 0; i < p.grid.count; ++i) {
    mixv[i] = 0.5 * (p.values[i] + q.values[i]);
    mixd[i] = 0.5 * (p.derivative[i] + q.derivative[i]);
  }
  TailModel mt = combine_tails(p.tail, q.tail);
  if (p.tail.active && q.tail.active && p.tail.alpha == q.tail.alpha) {
    mt.c_left = 0.5 * (p.tail.c_left + q.tail.c_left);
    mt.c_right = 0.5 * (p.tail.c_right + q.tail.c_right);
  } else if (p.tail.active != q.tail.active) {
    // only one summand extends past the window: the mixture carries half of it
    mt.c_left *= 0.5;
    mt.c_right *= 0.5;
  }
  const DensityGrid mix = make_density(p.grid, std::move(mixv), mt, std::move(mixd));
  out.push_back(make_report("convexity_half", fisher(mix), 0.5 * Ip + 0.5 * Iq));
  return out;
}

std::vector<InequalityReport> score_bound_inequalities(const DensityGrid& d,
                                                       const StableDensity& sd) {
  if (!sd.law.non_extremal() || sd.law.alpha == 2.0)
    throw ExtremalLaw("score-bound checks need a non-extremal non-normal reference");
  const double cz = 2.0 * sd.score_c2 * sd.score_c2;
  const double I = fisher(d);
  const double rel = relative_fisher(d, sd);
  std::vector<InequalityReport> out;
  out.push_back(make_report("relative_fisher_upper", rel, 2.0 * I + cz));
  out.push_back(make_report("fisher_from_relative", I, 2.0 * rel + cz));
  return out;
}

std::vector<InequalityReport> tv_and_charfn_bounds(const DensityGrid& d) {
  const double I = fisher(d);
  std::vector<InequalityReport> out;
  if (std::isinf(I)) {
    out.push_back(make_report("deriv_l1_vs_sqrt_fisher", 0.0, kInf));
    out.push_back(make_report("charfn_decay_vs_tv", 0.0, kInf));
    out.push_back(make_report("max_density_vs_sqrt_fisher", 0.0, kInf));
    return out;
  }
  double l1 = 0.0, pmax = 0.0;
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    l1 += std::abs(d.derivative[i]);
    pmax = std::max(pmax, d.values[i]);
  }
  l1 *= d.grid.dx;
  out.push_back(make_report("deriv_l1_vs_sqrt_fisher", l1, std::sqrt(I)));

  const Grid tgrid = conjugate_grid(d.grid, d.grid.count);
  const CharFnGrid f = density_to_charfn(d, tgrid);
  double sup_tf = 0.0;
  double witness_t = 0.0;
  for (std::size_t k = 0; k < tgrid.count; ++k) {
    const double v = std::abs(tgrid.node(k)) * std::abs(f.values[k]);
    if (v > sup_tf) {
      sup_tf = v;
      witness_t = tgrid.node(k);
    }
  }
  out.push_back(make_report("charfn_decay_vs_tv", sup_tf, tv_norm(d), witness_t));
  out.push_back(make_report("max_density_vs_sqrt_fisher", pmax, std::sqrt(I)));
  return out;
}

InequalityReport three_convolution_fisher(const DensityGrid& p1, const DensityGrid& p2,
                                          const DensityGrid& p3) {
  if (!(p1.grid == p2.grid) || !(p1.grid == p3.grid))
    throw GridMismatch("three_convolution_fisher needs a shared grid");
  const double t1 = tv_norm(p1), t2 = tv_norm(p2), t3 = tv_norm(p3);
  const std::size_t n2 = p1.grid.count * 2;
  const double center =
      p1.grid.node(p1.grid.count / 2) + p2.grid.node(p2.grid.count / 2) +
      p3.grid.node(p3.grid.count / 2);
  Grid out{center - 0.5 * static_cast<double>(n2) * p1.grid.dx, p1.grid.dx, n2};
  const Grid tgrid = conjugate_grid(out, n2);
  CharFnGrid f = density_to_charfn(p1, tgrid);
  const CharFnGrid f2 = density_to_charfn(p2, tgrid);
  const CharFnGrid f3 = density_to_charfn(p3, tgrid);
  for (std::size_t k = 0; k < n2; ++k) f.values[k] *= f2.values[k] * f3.values[k];
  DensityGrid conv = charfn_to_density(f, out);
  conv.derivative = charfn_to_density_derivative(f, out);
  conv.tail = combine_tails(combine_tails(p1.tail, p2.tail), p3.tail);
  const double I = fisher(conv);
  return make_report("three_convolution_fisher", I, 0.5 * (t1 * t2 + t1 * t3 + t2 * t3));
}

double tv_bound_from_charfn(const CharFnGrid& f, const cvec& fprime) {
  if (fprime.size() != f.grid.count)
    throw GridMismatch("charfn derivative array must match the grid");
  const std::size_t n = f.grid.count;
  const std::size_t band = std::max<std::size_t>(4, n / 256);
  double edge = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    for (std::size_t k : {i, n - 1 - i}) {
      const double t = f.grid.node(k);
      edge += t * t * (std::norm(f.values[k]) + std::norm(fprime[k]));
    }
  }
  edge /= static_cast<double>(2 * band);
  if (edge > tol::charfn_edge)
    throw NotIntegrable("t^2 (|f|^2 + |f'|^2) does not decay at the grid edges");
  double A = 0.0, B = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = f.grid.node(k);
    A += std::norm(t * f.values[k]);
    B += std::norm(f.values[k] + t * fprime[k]);  // (t f)' = f + t f'
  }
  A *= f.grid.dx;
  B *= f.grid.dx;
  return std::pow(A * B, 0.25);
}

ConvolutionPair make_convolution_pair(const DensityGrid& p1, const DensityGrid& p2) {
  if (!(p1.grid == p2.grid)) throw GridMismatch("convolution pair needs a shared grid");
  ConvolutionPair pair;
  pair.p1 = p1;
  pair.p2 = p2;
  pair.I1 = fisher(p1);
  pair.I2 = fisher(p2);
  const std::size_t n2 = p1.grid.count * 2;
  const double center = p1.grid.node(p1.grid.count / 2) + p2.grid.node(p2.grid.count / 2);
  Grid out{center - 0.5 * static_cast<double>(n2) * p1.grid.dx, p1.grid.dx, n2};
  const Grid tgrid = conjugate_grid(out, n2);
  CharFnGrid f = density_to_charfn(p1, tgrid);
  const CharFnGrid f2 = density_to_charfn(p2, tgrid);
  for (std::size_t k = 0; k < n2; ++k) f.values[k] *= f2.values[k];
  pair.conv = charfn_to_density(f, out);
  pair.conv.tail = combine_tails(p1.tail, p2.tail);
  pair.conv_d1 = charfn_to_density_derivative(f, out);
  pair.conv.derivative = pair.conv_d1;
  pair.conv_d2 = charfn_to_second_derivative(f, out);
  // p = 0 => p'' = 0 for two-fold convolutions of finite-Fisher densities
  const double pmax = *std::max_element(pair.conv.values.begin(), pair.conv.values.end());
  for (std::size_t i = 0; i < n2; ++i)
    if (pair.conv.values[i] <= 1e-12 * pmax) pair.conv_d2[i] = 0.0;
  return pair;
}

std::vector<InequalityReport> convolution_pair_checks(const ConvolutionPair& pair, double T) {
  const double I = std::max(pair.I1, pair.I2);
  const DensityGrid& c = pair.conv;
  const double pmax = *std::max_element(c.values.begin(), c.values.end());
  const double floor = 1e-12 * pmax;

  std::vector<InequalityReport> out;
  // pointwise |p'| <= I^{3/4} sqrt(p), reported as the worst ratio vs 1
  double worst = 0.0, worst_x = 0.0;
  for (std::size_t i = 0; i < c.grid.count; ++i) {
    if (c.values[i] <= floor) continue;
    const double ratio =
        std::abs(pair.conv_d1[i]) / (std::pow(I, 0.75) * std::sqrt(c.values[i]));
    if (ratio > worst) {
      worst = ratio;
      worst_x = c.grid.node(i);
    }
  }
  out.push_back(make_report("conv_pointwise_derivative_bound", worst, 1.0, worst_x));
  // joint second half of the pointwise bound: I^{3/4} sqrt(max p) <= I
  out.push_back(make_report("conv_pointwise_vs_fisher", std::pow(I, 0.75) * std::sqrt(pmax), I));

  double integral = 0.0;
  for (std::size_t i = 0; i < c.grid.count; ++i) {
    if (c.values[i] <= floor) continue;
    integral += pair.conv_d2[i] * pair.conv_d2[i] / c.values[i];
  }
  integral *= c.grid.dx;
  out.push_back(make_report("conv_second_derivative_integral", integral, I * I));

  // tail bound at T (meaningful when p(T) < 1)
  double tail_fisher = 0.0, tail_logsq = 0.0;
  for (std::size_t i = 0; i < c.grid.count; ++i) {
    if (c.grid.node(i) < T || c.values[i] <= floor) continue;
    tail_fisher += pair.conv_d1[i] * pair.conv_d1[i] / c.values[i];
    const double lg = std::log(c.values[i]);
    tail_logsq += c.values[i] * lg * lg;
  }
  tail_fisher *= c.grid.dx;
  tail_logsq *= c.grid.dx;
  if (c.tail.active && c.tail.c_right > 0.0 && c.grid.cover_hi() > T) {
    const double a = c.tail.alpha;
    const double X = c.grid.cover_hi();
    tail_fisher += tail_integral(
        [&](double x) {
          return (1.0 + a) * (1.0 + a) * c.tail.c_right * std::pow(x, -(3.0 + a));
        },
        X);
    tail_logsq += tail_integral(
        [&](double x) {
          const double p = c.tail.density_at(x);
          const double lg = std::log(std::max(p, tol::density_floor));
          return p * lg * lg;
        },
        X);
  }
  // p(T) from the nearest node
  const double pos = (T - c.grid.x_lo) / c.grid.dx;
  const std::size_t iT =
      std::min(c.grid.count - 1, static_cast<std::size_t>(std::max(0.0, pos + 0.5)));
  const double pT = std::max(c.values[iT], tol::density_floor);
  const double rhs = std::pow(I, 0.75) * std::sqrt(pT) * std::abs(std::log(pT)) +
                     I * std::sqrt(tail_logsq);
  out.push_back(make_report("conv_tail_fisher_bound", tail_fisher, rhs, T));
  return out;
}

}  // namespace sfi
