#include "cfsampler/pt_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cfsampler/errors.hpp"
#include "cfsampler/quadrature.hpp"

namespace cfsampler {

std::vector<std::int64_t> sample_pt_compound(double a, double b, double c, Rng& rng,
                                             std::size_t n) {
  if (!(a < 0.0) || !(b > 0.0) || !(c > 0.0 && c < 1.0)) {
    throw InvalidParameters("compound Poisson-Tweedie needs a < 0, b > 0, c in (0, 1)");
  }
  const double rate = -(b / a) * std::pow(1.0 - c, a);
  const double shape_per_term = -a;
  const double odds = c / (1.0 - c);  // NB(r, q): Poisson(Gamma(r, (1-q)/q))
  std::poisson_distribution<std::int64_t> count(rate);
  std::vector<std::int64_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t terms = count(rng);
    if (terms == 0) {
      out.push_back(0);
      continue;
    }
    std::gamma_distribution<double> gamma(shape_per_term * static_cast<double>(terms), odds);
    const double mean = gamma(rng);
    std::poisson_distribution<std::int64_t> draw(std::max(mean, 1e-300));
    out.push_back(draw(rng));
  }
  return out;
}

double tilted_stable_check(double a, double b, double c, std::int64_t x_lo,
                           std::int64_t x_hi, double tol) {
  if (!(a > 0.0 && a <= 1.0) || !(c > 0.0 && c < 1.0)) {
    throw InvalidParameters("tilted stable check needs a in (0, 1], c in (0, 1)");
  }
  const Distribution tweedie = Distribution::poisson_tweedie(a, b, c);
  const Distribution stable = Distribution::discrete_stable(a, b);
  const double tilt = std::exp((b / a) * std::pow(1.0 - c, a));
  double worst = 0.0;
  for (std::int64_t x = x_lo; x <= x_hi; ++x) {
    const double px = pf_inversion_raw(tweedie, x, tol).value;
    const double py = pf_inversion_raw(stable, x, tol).value;
    const double rhs = tilt * std::pow(c, static_cast<double>(x)) * py;
    worst = std::max(worst, std::fabs(px - rhs));
  }
  return worst;
}

}  // namespace cfsampler
