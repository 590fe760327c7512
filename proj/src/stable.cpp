#include "sfi/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfi/errors.hpp"

namespace sfi {

namespace {
constexpr double kPi = 3.141592653589793;
}

bool StableLaw::non_extremal() const {
  return alpha == 2.0 || (alpha < 2.0 && beta > -1.0 && beta < 1.0);
}

void StableLaw::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ValidationError("stable index alpha must be in (0,2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw ValidationError("skewness beta must be in [-1,1]");
  if (!(scale_c > 0.0)) throw ValidationError("scale c must be positive");
  if (!std::isfinite(location_a)) throw ValidationError("location a must be finite");
}

std::complex<double> stable_charfn_at(const StableLaw& law, double t) {
  if (t == 0.0) return {1.0, 0.0};
  const double at = std::abs(t);
  const double sgn = t > 0.0 ? 1.0 : -1.0;
  double omega;
  if (law.alpha == 2.0) {
    omega = 0.0;  // tan(pi) = 0: the beta term vanishes for the normal law
  } else if (law.alpha == 1.0) {
    omega = (2.0 / kPi) * std::log(at);
  } else {
    omega = std::tan(kPi * law.alpha / 2.0);
  }
  const double mod = law.scale_c * std::pow(at, law.alpha);
  const std::complex<double> expo(-mod, law.location_a * t - mod * law.beta * sgn * omega);
  return std::exp(expo);
}

CharFnGrid stable_charfn(const StableLaw& law, const Grid& tgrid) {
  law.validate();
  tgrid.validate();
  CharFnGrid f;
  f.grid = tgrid;
  f.values.resize(tgrid.count);
  for (std::size_t k = 0; k < tgrid.count; ++k) f.values[k] = stable_charfn_at(law, tgrid.node(k));
  return f;
}

namespace {

double asymptotic_score(const StableLaw& law, double x) {
  if (law.alpha == 2.0) return -(x - law.location_a) / (2.0 * law.scale_c);
  return -(1.0 + law.alpha) / x;
}

}  // namespace

StableDensity stable_density(const StableLaw& law, const Grid& xgrid, int pad) {
  law.validate();
  xgrid.validate();
  if (!law.non_extremal()) throw ExtremalLaw("stable_density requires a non-extremal law");

  // padded window, same spacing: anti-aliases the slow power tails
  const Grid padded = padded_grid(xgrid, pad);
  const Grid tgrid = conjugate_grid(padded, padded.count);
  const CharFnGrid f = stable_charfn(law, tgrid);

  StableDensity sd;
  sd.law = law;
  sd.density = invert_cropped(f, xgrid, padded, law.alpha);

  const double pmax = *std::max_element(sd.density.values.begin(), sd.density.values.end());
  const double score_floor = 1e-12 * pmax;
  sd.score.resize(xgrid.count);
  for (std::size_t i = 0; i < xgrid.count; ++i) {
    const double x = xgrid.node(i);
    if (sd.density.values[i] > score_floor)
      sd.score[i] = sd.density.derivative[i] / sd.density.values[i];
    else
      sd.score[i] = x == 0.0 ? 0.0 : asymptotic_score(law, x);
  }

  if (law.alpha < 2.0) {
    double c1 = std::numeric_limits<double>::infinity(), c2 = 0.0;
    for (std::size_t i = 0; i < xgrid.count; ++i) {
      const double x = xgrid.node(i);
      if (std::abs(x) < 5.0) continue;
      const double v = std::abs(sd.score[i]) * (1.0 + std::abs(x));
      c1 = std::min(c1, v);
      c2 = std::max(c2, v);
    }
    sd.score_c1 = std::isfinite(c1) ? c1 : 0.0;
    sd.score_c2 = c2;
  }
  return sd;
}

double stable_score_at(const StableDensity& sd, double x) {
  const Grid& g = sd.density.grid;
  const double pos = (x - g.x_lo) / g.dx;
  if (pos < 0.0 || pos > static_cast<double>(g.count - 1)) return asymptotic_score(sd.law, x);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), g.count - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * sd.score[i] + w * sd.score[i + 1];
}

}  // namespace sfi
