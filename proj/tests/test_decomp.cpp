#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sfi/decomp.hpp"
#include "sfi/errors.hpp"

using namespace sfi;

TEST_CASE("cauchy truncation at n = 8") {
  const SourceModel s = SourceModel::cauchy();
  const NormalizingSeq norm{1.0, 1.0, 0.0};
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const Truncation tr = truncate(s, 8, norm, g);

  CHECK(tr.b_n == doctest::Approx(8.0));
  // delta_n = 1 - (2/pi) arctan(b_n), closed form
  CHECK(8.0 * tr.delta_n == doctest::Approx(0.6333347866).epsilon(1e-8));
  CHECK(std::abs(tr.d_n) < 1e-12);  // symmetric source

  // conditional densities carry unit mass
  CHECK(std::abs(tr.p_tilde.window_mass() - 1.0) < 1e-5);
  CHECK(std::abs(tr.q_tilde.total_mass() - 1.0) < 1e-4);
  CHECK(tr.q_tilde.tail.active);

  // f_tilde(0) = g_tilde(0) = 1
  CHECK(std::abs(tr.f_tilde_at(0.0) - 1.0) < 1e-12);
  CHECK(std::abs(tr.g_tilde_at(0.0) - 1.0) < 1e-5);

  // mixture identity: (1-delta) f~ + delta g~ = f(t/b_n) = e^{-|t|/8}
  for (double t : {0.7, 3.3, 57.0}) {
    const auto mix = (1.0 - tr.delta_n) * tr.f_tilde_at(t) + tr.delta_n * tr.g_tilde_at(t);
    CHECK(std::abs(mix - std::exp(-t / 8.0)) < 1e-6);
  }

  // psi_n = e^{-i t d_n} f~; centered slope bound is finite and positive
  const std::size_t zero = tr.psi_n.grid.count / 2;
  CHECK(std::abs(tr.psi_n.values[zero] - 1.0) < 1e-12);
  const double chat = centered_charfn_slope_bound(tr);
  CHECK(chat > 0.0);
  CHECK(std::isfinite(chat));
}

TEST_CASE("truncated charfn envelope and integrability witnesses") {
  const SourceModel s = SourceModel::cauchy();
  const NormalizingSeq norm{1.0, 1.0, 0.0};
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const Truncation tr = truncate(s, 8, norm, g);

  const auto env = truncated_charfn_envelope(tr, 0.5);
  CHECK(env.satisfied);
  CHECK(env.rhs > 0.0);

  const auto integ = charfn_power_integrability(tr, 8);
  CHECK(std::isfinite(integ.first));
  CHECK(std::isfinite(integ.second));
  CHECK(integ.first > 0.0);
  CHECK(integ.second > 0.0);
}

TEST_CASE("binomial reconstruction closes to the direct density") {
  const SourceModel s = SourceModel::cauchy();
  const NormalizingSeq norm{1.0, 1.0, 0.0};
  const Grid g = make_centered_grid(64.0, 1 << 14);
  const Truncation tr = truncate(s, 8, norm, g);
  const BinomialReconstruction rec = binomial_reconstruction(s, tr);

  double wsum = rec.dropped_weight;
  for (double w : rec.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.dropped_weight < 1e-8);
  for (double m : rec.term_mass) CHECK(m == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rec.reconstruction_error < 1e-5);
}

TEST_CASE("slope bound stays within a factor 4 across n") {
  const SourceModel s = SourceModel::cauchy();
  const NormalizingSeq norm{1.0, 1.0, 0.0};
  const Grid g = make_centered_grid(64.0, 1 << 13);
  double lo = 1e300, hi = 0.0;
  for (int n : {8, 16}) {
    const double c = centered_charfn_slope_bound(truncate(s, n, norm, g));
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi / lo < 4.0);
}

TEST_CASE("fisher boundedness witness") {
  const auto r = fisher_boundedness_witness(SourceModel::cauchy(), {8, 16});
  CHECK(r.satisfied);
  CHECK(r.lhs < 4.0);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness < 1e-6);  // dropped small-k aggregate weight
}

TEST_CASE("truncation rejects degenerate inputs") {
  const NormalizingSeq norm{1.0, 1.0, 0.0};
  const Grid g = make_centered_grid(64.0, 1 << 13);
  CHECK_THROWS_AS(truncate(SourceModel::cauchy(), 1, norm, g), ValidationError);
}
