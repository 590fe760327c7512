#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "sfi/errors.hpp"
#include "sfi/info.hpp"

using namespace sfi;

namespace {

constexpr double kPi = 3.141592653589793;

DensityGrid gaussian_grid(const Grid& g, double var = 1.0) {
  std::vector<double> v(g.count), d(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.node(i);
    v[i] = std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var);
    d[i] = -x / var * v[i];
  }
  return make_density(g, std::move(v), TailModel{}, std::move(d));
}

DensityGrid cauchy_grid(const Grid& g) {
  std::vector<double> v(g.count), d(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.node(i);
    v[i] = 1.0 / (kPi * (1.0 + x * x));
    d[i] = -2.0 * x / (kPi * (1.0 + x * x) * (1.0 + x * x));
  }
  return make_density(g, std::move(v), TailModel{1.0, 1.0 / kPi, 1.0 / kPi, true}, std::move(d));
}

DensityGrid uniform_grid(const Grid& g) {
  // uniform on [0,1], jumps placed on cell edges
  std::vector<double> v(g.count, 0.0);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.node(i);
    if (x > 0.0 && x < 1.0) v[i] = 1.0;
  }
  return make_density(g, std::move(v));
}

// unit-variance triangle (sum of two iid uniforms, standardized)
DensityGrid triangle_grid(const Grid& g) {
  const double s6 = std::sqrt(6.0);
  std::vector<double> v(g.count, 0.0), d(g.count, 0.0);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double x = g.node(i);
    if (std::abs(x) < s6) {
      v[i] = (s6 - std::abs(x)) / 6.0;
      d[i] = x < 0.0 ? 1.0 / 6.0 : -1.0 / 6.0;
    }
  }
  return make_density(g, std::move(v), TailModel{}, std::move(d));
}

}  // namespace

TEST_CASE("fisher information oracles") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  CHECK(fisher(gaussian_grid(g)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fisher(gaussian_grid(g, 2.0)) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fisher(cauchy_grid(g)) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("fisher scaling homogeneity") {
  // p_b(x) = p(x/b)/b has I(p_b) = I(p)/b^2
  const double I1 = fisher(gaussian_grid(make_centered_grid(64.0, 1 << 14)));
  for (double b : {0.5, 2.0}) {
    const Grid g = make_centered_grid(64.0 * b, 1 << 14);
    std::vector<double> v(g.count), d(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
      const double x = g.node(i) / b;
      v[i] = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi) / b;
      d[i] = -x * v[i] / b;
    }
    const double Ib = fisher(make_density(g, std::move(v), TailModel{}, std::move(d)));
    CHECK(Ib * b * b == doctest::Approx(I1).epsilon(1e-6));
  }
}

TEST_CASE("non-smooth density is reported as infinite information") {
  const DensityGrid u = uniform_grid(make_centered_grid(4.0, 1 << 12));
  CHECK(std::isinf(fisher(u)));
}

TEST_CASE("relative fisher and entropy oracles") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const DensityGrid n01 = gaussian_grid(g);
  const StableDensity z1 = stable_density(StableLaw{2.0, 0.0, 0.5, 0.0}, g);
  CHECK(relative_fisher(n01, z1) < 1e-8);
  CHECK(std::abs(relative_entropy(n01, z1)) < 1e-8);

  // N(0,1) against N(0,2): score gap x/2, so I(X||Z) = E x^2/4 = 1/4;
  // D = 0.5*(log 2 + 1/2 - 1)
  const StableDensity z2 = stable_density(StableLaw{2.0, 0.0, 1.0, 0.0}, g);
  CHECK(relative_fisher(n01, z2) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(relative_entropy(n01, z2) ==
        doctest::Approx(0.5 * (std::log(2.0) - 0.5)).epsilon(1e-6));
  CHECK_THROWS_AS(relative_fisher(gaussian_grid(make_centered_grid(32.0, 1 << 13)), z1),
                  GridMismatch);
}

TEST_CASE("relative entropy of the triangle against the normal") {
  // independent oracle: adaptive quadrature of (sqrt6-|x|)/6 * log(p/phi)
  const Grid g = make_centered_grid(16.0, 1 << 14);
  const DensityGrid tri = triangle_grid(g);
  const StableDensity z = stable_density(StableLaw{2.0, 0.0, 0.5, 0.0}, g);
  CHECK(relative_entropy(tri, z) == doctest::Approx(0.023058798590645241).epsilon(1e-6));
}

TEST_CASE("convolution identities") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const DensityGrid conv_g = convolve(gaussian_grid(g), gaussian_grid(g));
  double worst = 0.0;
  for (std::size_t i = 0; i < conv_g.grid.count; ++i) {
    const double x = conv_g.grid.node(i);
    worst = std::max(worst,
                     std::abs(conv_g.values[i] - std::exp(-0.25 * x * x) / std::sqrt(4.0 * kPi)));
  }
  CHECK(worst < 1e-8);

  const DensityGrid conv_c = convolve(cauchy_grid(g), cauchy_grid(g));
  CHECK(conv_c.tail.active);
  CHECK(conv_c.tail.c_right == doctest::Approx(2.0 / kPi));
  worst = 0.0;
  for (std::size_t i = 0; i < conv_c.grid.count; ++i) {
    const double x = conv_c.grid.node(i);
    worst = std::max(worst, std::abs(conv_c.values[i] - 2.0 / (kPi * (4.0 + x * x))));
  }
  CHECK(worst < 1e-5);
  CHECK(std::abs(conv_c.total_mass() - 1.0) < 1e-4);
}

TEST_CASE("information inequalities: stam, monotonicity, convexity") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  auto reports = information_inequalities(gaussian_grid(g), gaussian_grid(g));
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) CHECK(r.satisfied);
  // Stam attains equality for iid Gaussians
  CHECK(std::abs(reports[0].margin) < 1e-6);

  auto rc = information_inequalities(cauchy_grid(g), gaussian_grid(g));
  for (const auto& r : rc) CHECK(r.satisfied);

  // infinite-information inputs produce vacuous (but satisfied) reports
  auto rv = information_inequalities(uniform_grid(make_centered_grid(4.0, 1 << 12)),
                                     uniform_grid(make_centered_grid(4.0, 1 << 12)));
  for (const auto& r : rv) {
    CHECK(r.vacuous);
    CHECK(r.satisfied);
  }
}

TEST_CASE("score-envelope bounds relative fisher both ways") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const StableDensity zc = stable_density(StableLaw{1.0, 0.0, 1.0, 0.0}, g);
  auto reports = score_bound_inequalities(cauchy_grid(g), zc);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) CHECK(r.satisfied);
  const StableDensity z2 = stable_density(StableLaw{2.0, 0.0, 0.5, 0.0}, g);
  CHECK_THROWS_AS(score_bound_inequalities(gaussian_grid(g), z2), ExtremalLaw);
}

TEST_CASE("tv and charfn bounds") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  for (const DensityGrid& d : {gaussian_grid(g), cauchy_grid(g)}) {
    auto reports = tv_and_charfn_bounds(d);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) CHECK(r.satisfied);
  }
  // Gaussian: ||p'||_1 = 2 max p = 2/sqrt(2 pi) <= sqrt(I) = 1; the midpoint
  // quadrature of |p'| loses a few 1e-6 at the kink of |x| p(x) at the origin
  auto rg = tv_and_charfn_bounds(gaussian_grid(g));
  CHECK(rg[0].lhs == doctest::Approx(2.0 / std::sqrt(2.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("three-fold convolution fisher bound for uniforms") {
  const Grid g = make_centered_grid(4.0, 1 << 15);
  const DensityGrid u = uniform_grid(g);
  const auto r = three_convolution_fisher(u, u, u);
  CHECK(r.satisfied);
  // exact: I(U*U*U) = 2 sqrt(3) log((sqrt3+1)/(sqrt3-1)); bound is 6 at TV = 2
  CHECK(r.lhs == doctest::Approx(4.5620759778056781).epsilon(2e-3));
  CHECK(r.rhs == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("tv bound from the charfn side") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const DensityGrid d = gaussian_grid(g);
  const Grid tg = conjugate_grid(g, g.count);
  const CharFnGrid f = density_to_charfn(d, tg);
  cvec fprime(tg.count);
  for (std::size_t k = 0; k < tg.count; ++k) {
    const double t = tg.node(k);
    fprime[k] = -t * std::exp(-0.5 * t * t);  // f'(t) for the standard normal
  }
  const double bound = tv_bound_from_charfn(f, fprime);
  CHECK(tv_norm(d) <= bound * (1.0 + 1e-9));
}

TEST_CASE("two-fold convolution class checks") {
  const Grid g = make_centered_grid(64.0, 1 << 14);
  for (const DensityGrid& d : {gaussian_grid(g), cauchy_grid(g)}) {
    const ConvolutionPair pair = make_convolution_pair(d, d);
    CHECK(std::isfinite(pair.I1));
    auto reports = convolution_pair_checks(pair, 5.0);
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) CHECK(r.satisfied);
  }
}

TEST_CASE("report tolerance semantics") {
  CHECK(make_report("x", 1.0, 1.0).satisfied);
  CHECK(make_report("x", 1.0 + 1e-9, 1.0).satisfied);       // inside relative tolerance
  CHECK_FALSE(make_report("x", 1.001, 1.0).satisfied);
  const auto v = make_report("x", 0.0, std::numeric_limits<double>::infinity());
  CHECK(v.vacuous);
  CHECK(v.satisfied);
}
