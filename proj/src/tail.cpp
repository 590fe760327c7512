#include "sfi/tail.hpp"

#include <cmath>
#include <limits>

#include "sfi/errors.hpp"

namespace sfi {

// 16-point Gauss-Legendre nodes/weights on [-1,1].
const double gauss16_x[16] = {
    -0.98940093499164993, -0.94457502307323258, -0.86563120238783175, -0.75540440835500303,
    -0.61787624440264375, -0.45801677765722739, -0.28160355077925891, -0.09501250983763744,
    0.09501250983763744,  0.28160355077925891,  0.45801677765722739,  0.61787624440264375,
    0.75540440835500303,  0.86563120238783175,  0.94457502307323258,  0.98940093499164993};
const double gauss16_w[16] = {
    0.02715245941175409, 0.06225352393864789, 0.09515851168249278, 0.12462897125553387,
    0.14959598881657673, 0.16915651939500254, 0.18260341504492359, 0.18945061045506850,
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
    0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};

namespace {

constexpr const double* kGx = gauss16_x;
constexpr const double* kGw = gauss16_w;

// Asymptotic tail of the oscillatory integral at large s, via repeated
// integration by parts with optimal truncation.
std::complex<double> osc_asymptotic(double beta, double s) {
  std::complex<double> total{0.0, 0.0};
  std::complex<double> pref{1.0, 0.0};
  const std::complex<double> ie_is = std::complex<double>(0.0, 1.0) *
                                     std::complex<double>(std::cos(s), std::sin(s));
  double b = beta;
  double prev = std::numeric_limits<double>::infinity();
  for (int m = 0; m < 60; ++m) {
    const std::complex<double> term = pref * ie_is * std::pow(s, -b);
    if (std::abs(term) > prev) break;
    total += term;
    prev = std::abs(term);
    pref *= std::complex<double>(0.0, -b);
    b += 1.0;
  }
  return total;
}

}  // namespace

std::complex<double> osc_tail_integral(double alpha, double s) {
  const double beta = 1.0 + alpha;
  const double s_asym = 30.0;
  if (s >= s_asym) return osc_asymptotic(beta, s);

  std::complex<double> val = osc_asymptotic(beta, s_asym);
  auto panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> acc{0.0, 0.0};
    for (int i = 0; i < 16; ++i) {
      const double u = mid + half * kGx[i];
      acc += kGw[i] * std::complex<double>(std::cos(u), std::sin(u)) * std::pow(u, -beta);
    }
    return half * acc;
  };
  // doubling panels below u=1 (integrable singularity region), unit panels to 30
  double a = s;
  while (a < 1.0) {
    const double b = std::min(a * 2.0, 1.0);
    val += panel(a, b);
    a = b;
  }
  while (a < s_asym) {
    const double b = std::min(a + 1.0, s_asym);
    val += panel(a, b);
    a = b;
  }
  return val;
}

double tail_integral(const std::function<double(double)>& F, double X) {
  if (!(X > 0.0)) throw TailUnbounded("tail integral requires a positive window edge");
  double total = 0.0;
  double a = X;
  double prev_panel = std::numeric_limits<double>::infinity();
  int grew = 0;
  for (int k = 0; k < 120; ++k) {
    const double b = a * 2.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) acc += kGw[i] * F(mid + half * kGx[i]);
    const double panel = half * acc;
    if (!std::isfinite(panel)) throw NonFiniteIntegrand("tail panel is non-finite");
    total += panel;
    const double mag = std::abs(panel);
    if (mag > prev_panel * 1.0000001) {
      if (++grew > 3) throw TailUnbounded("tail panels are not decaying");
    }
    prev_panel = mag;
    if (mag < 1e-18 * (std::abs(total) + 1e-300)) break;
    a = b;
  }
  return total;
}

}  // namespace sfi
