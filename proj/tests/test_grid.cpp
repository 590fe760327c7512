#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "sfi/errors.hpp"
#include "sfi/grid.hpp"
#include "sfi/tail.hpp"

using namespace sfi;

namespace {

constexpr double kPi = 3.141592653589793;

DensityGrid cauchy_grid(double halfwidth, std::size_t count) {
  Grid g = make_centered_grid(halfwidth, count);
  std::vector<double> vals(count), deriv(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = g.node(i);
    vals[i] = 1.0 / (kPi * (1.0 + x * x));
    deriv[i] = -2.0 * x / (kPi * (1.0 + x * x) * (1.0 + x * x));
  }
  TailModel tail{1.0, 1.0 / kPi, 1.0 / kPi, true};
  return make_density(g, std::move(vals), tail, std::move(deriv));
}

DensityGrid gaussian_grid(double halfwidth, std::size_t count) {
  Grid g = make_centered_grid(halfwidth, count);
  std::vector<double> vals(count), deriv(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = g.node(i);
    vals[i] = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    deriv[i] = -x * vals[i];
  }
  return make_density(g, std::move(vals), TailModel{}, std::move(deriv));
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  Grid g = make_centered_grid(64.0, 1 << 10);
  CHECK(g.node(512) == doctest::Approx(0.0));
  CHECK(g.symmetric_about_zero());
  CHECK(g.cover_hi() - g.cover_lo() == doctest::Approx(128.0));
  CHECK_THROWS_AS((Grid{0.0, -1.0, 1024}.validate()), ValidationError);
  CHECK_THROWS_AS((Grid{0.0, 0.1, 1000}.validate()), ValidationError);  // not a power of two
}

TEST_CASE("conjugate grid is conformal and symmetric") {
  Grid x = make_centered_grid(64.0, 1 << 12);
  Grid t = conjugate_grid(x, x.count);
  CHECK(t.dx * x.dx * static_cast<double>(x.count) == doctest::Approx(2.0 * kPi));
  CHECK(t.symmetric_about_zero());
  CHECK(t.node(t.count / 2) == doctest::Approx(0.0));
}

TEST_CASE("tail model mass") {
  TailModel tail{1.5, 0.2, 0.4, true};
  CHECK(tail.mass_beyond(10.0, 20.0) ==
        doctest::Approx((0.2 * std::pow(10.0, -1.5) + 0.4 * std::pow(20.0, -1.5)) / 1.5));
  CHECK(tail.density_at(-2.0) == doctest::Approx(0.2 * std::pow(2.0, -2.5)));
}

TEST_CASE("finite differences are 4th order") {
  Grid g = make_centered_grid(3.0, 1 << 9);
  std::vector<double> v(g.count);
  for (std::size_t i = 0; i < g.count; ++i) v[i] = std::sin(g.node(i));
  auto d = finite_diff_derivative(g, v);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.count; ++i)
    worst = std::max(worst, std::abs(d[i] - std::cos(g.node(i))));
  CHECK(worst < 1e-8);
}

TEST_CASE("quadrature with tail correction integrates a Cauchy to one") {
  // the pure power-tail model differs from the true Cauchy tail by
  // ~ 2/(3 pi X^3), so the mass gap at X = 40 is a few 1e-6
  DensityGrid d = cauchy_grid(40.0, 1 << 13);
  const double mass = quadrature(d, [](double, double) { return 1.0; });
  CHECK(std::abs(mass - 1.0) < 1e-5);
  const double second_abs = quadrature(d, [](double x, double) { return std::abs(x); });
  CHECK(second_abs > 1.0);  // E|X| diverges logarithmically; finite on the model
}

TEST_CASE("density_to_charfn matches the exact Cauchy transform") {
  DensityGrid d = cauchy_grid(64.0, 1 << 14);
  Grid tg = conjugate_grid(d.grid, d.grid.count);
  CharFnGrid f = density_to_charfn(d, tg);
  f.validate();
  double worst = 0.0;
  for (std::size_t k = 0; k < tg.count; ++k)
    worst = std::max(worst, std::abs(f.values[k] - std::exp(-std::abs(tg.node(k)))));
  CHECK(worst < 1e-6);
  // pointwise evaluator agrees off the uniform grid
  const auto v = density_charfn_at(d, 0.37);
  CHECK(std::abs(v - std::exp(-0.37)) < 1e-6);
}

TEST_CASE("nyquist violation is rejected") {
  DensityGrid d = cauchy_grid(16.0, 1 << 10);
  Grid bad{-200.0, 400.0 / 1024.0, 1024};  // way past pi/dx
  CHECK_THROWS_AS(density_to_charfn(d, bad), GridMismatch);
}

TEST_CASE("fourier round trip on an oversampled frequency grid") {
  // the frequency spacing sets the periodization length; heavy tails need an
  // oversampled (padded) t-grid for the folded mass to drop below 1e-7
  for (int heavy : {0, 1}) {
    DensityGrid d = heavy ? cauchy_grid(64.0, 1 << 14) : gaussian_grid(64.0, 1 << 14);
    const Grid padded = padded_grid(d.grid, 32);
    const Grid tg = conjugate_grid(padded, padded.count);
    const CharFnGrid f = density_to_charfn(d, tg);
    const DensityGrid back = charfn_to_density(f, d.grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.grid.count; ++i)
      worst = std::max(worst, std::abs(back.values[i] - d.values[i]));
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("spectral derivatives match analytic ones") {
  DensityGrid d = gaussian_grid(64.0, 1 << 14);
  const Grid tg = conjugate_grid(d.grid, d.grid.count);
  const CharFnGrid f = density_to_charfn(d, tg);
  const auto d1 = charfn_to_density_derivative(f, d.grid);
  const auto d2 = charfn_to_second_derivative(f, d.grid);
  double w1 = 0.0, w2 = 0.0;
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    const double x = d.grid.node(i);
    const double p = d.values[i];
    w1 = std::max(w1, std::abs(d1[i] + x * p));
    w2 = std::max(w2, std::abs(d2[i] - (x * x - 1.0) * p));
  }
  CHECK(w1 < 1e-8);
  CHECK(w2 < 1e-7);
}

TEST_CASE("tv norm of a triangle is twice the peak") {
  Grid g = make_centered_grid(4.0, 1 << 12);
  std::vector<double> v(g.count, 0.0);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.node(i);
    if (std::abs(x) < 1.0) v[i] = 1.0 - std::abs(x);
  }
  DensityGrid d = make_density(g, std::move(v));
  CHECK(tv_norm(d) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("oscillatory tail integral is consistent across its regimes") {
  // E(alpha, s1) - E(alpha, s2) must equal the direct integral over [s1, s2];
  // s1 is handled by panel quadrature, s2 by the asymptotic expansion
  const double alpha = 1.2, s1 = 0.5, s2 = 45.0;
  const auto gap = osc_tail_integral(alpha, s1) - osc_tail_integral(alpha, s2);
  std::complex<double> direct{0.0, 0.0};
  const int n = 400000;  // Simpson
  const double h = (s2 - s1) / n;
  auto f = [&](double u) {
    return std::complex<double>(std::cos(u), std::sin(u)) * std::pow(u, -1.0 - alpha);
  };
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    direct += w * f(s1 + i * h);
  }
  direct *= h / 3.0;
  CHECK(std::abs(gap - direct) < 1e-10);
  CHECK(std::abs(osc_tail_integral(1.0, 5000.0)) < 1e-6);
}

TEST_CASE("negative inversion input is rejected") {
  // exp(-t^4) is not positive-definite (it is too flat at the origin), so its
  // inverse transform dips below zero
  Grid x = make_centered_grid(8.0, 1 << 10);
  Grid tg = conjugate_grid(x, x.count);
  CharFnGrid f;
  f.grid = tg;
  f.values.assign(tg.count, {0.0, 0.0});
  for (std::size_t k = 0; k < tg.count; ++k) {
    const double t = tg.node(k);
    f.values[k] = std::exp(-t * t * t * t);
  }
  CHECK_THROWS_AS(charfn_to_density(f, x), NotADensity);
}
